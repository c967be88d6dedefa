#include "psec/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "psec/errors.hpp"

namespace psec {

std::string RuleDescriptor::to_string() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", params[i].second);
    if (i > 0) out += ',';
    out += params[i].first + "=" + buf;
  }
  return out + ")";
}

Decision decide(const ActiveRule& rule, const PrefixState& state, std::size_t t, std::size_t n) {
  if (state.size() != t) throw ParamError("prefix state does not match t");
  if (t >= n) return Decision::stop;
  return rule.decide(state, n);
}

namespace {

void check_size(std::size_t configured, std::size_t actual) {
  if (configured != actual) {
    throw ParamError("rule configured for n=" + std::to_string(configured) +
                     " activated on a poset of size " + std::to_string(actual));
  }
}

class ActiveTauK final : public ActiveRule {
 public:
  ActiveTauK(std::size_t k, std::size_t skip) : k_(k), skip_(skip) {}

  Decision decide(const PrefixState& state, std::size_t n) const override {
    const std::size_t t = state.size();
    if (t >= n) return Decision::stop;
    if (t <= skip_) return Decision::wait;
    return state.maximal_count() <= k_ && state.current_is_maximal() ? Decision::stop
                                                                     : Decision::wait;
  }

 private:
  std::size_t k_;
  std::size_t skip_;
};

class ActiveThreshold final : public ActiveRule {
 public:
  explicit ActiveThreshold(std::size_t r) : r_(r) {}

  Decision decide(const PrefixState& state, std::size_t n) const override {
    const std::size_t t = state.size();
    if (t >= n) return Decision::stop;
    if (t < r_) return Decision::wait;
    return state.maximal_count() == 1 && state.current_is_maximal() ? Decision::stop
                                                                    : Decision::wait;
  }

 private:
  std::size_t r_;
};

}  // namespace

TauKRule::TauKRule(std::size_t n, std::size_t k, double p) : n_(n), k_(k), p_(p) {
  if (!(p > 0.0 && p < 1.0)) throw ParamError("tau_k requires 0 < p < 1");
  if (k < 1) throw ParamError("tau_k requires k >= 1");
  if (n < 1) throw ParamError("tau_k requires n >= 1");
  // Binomial pmf in log space so (1-p)^n cannot underflow the running sum.
  cdf_.resize(n + 1);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
  double acc = 0.0;
  for (std::size_t x = 0; x <= n; ++x) {
    const double xd = static_cast<double>(x);
    const double log_pmf = log_n_fact - std::lgamma(xd + 1.0) -
                           std::lgamma(static_cast<double>(n - x) + 1.0) + xd * log_p +
                           static_cast<double>(n - x) * log_q;
    acc += std::exp(log_pmf);
    cdf_[x] = acc;
  }
}

RuleDescriptor TauKRule::descriptor() const {
  return {"tau_k", {{"k", static_cast<double>(k_)}, {"p", p_}}};
}

std::size_t TauKRule::skip_for_uniform(double u) const {
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  return it == cdf_.end() ? n_ : static_cast<std::size_t>(it - cdf_.begin());
}

std::unique_ptr<ActiveRule> TauKRule::activate(std::size_t n, RandomnessStream& rnd) const {
  check_size(n_, n);
  return activate_with_skip(skip_for_uniform(rnd.uniform()));
}

std::unique_ptr<ActiveRule> TauKRule::activate_with_skip(std::size_t skip) const {
  if (skip > n_) throw ParamError("warm-up length exceeds n");
  return std::make_unique<ActiveTauK>(k_, skip);
}

ThresholdRule::ThresholdRule(std::size_t n, std::size_t r) : n_(n), r_(r) {
  if (r < 1 || r > n) throw ParamError("threshold requires 1 <= r <= n");
}

RuleDescriptor ThresholdRule::descriptor() const {
  return {"threshold", {{"r", static_cast<double>(r_)}}};
}

std::unique_ptr<ActiveRule> ThresholdRule::activate(std::size_t n, RandomnessStream&) const {
  check_size(n_, n);
  return std::make_unique<ActiveThreshold>(r_);
}

std::shared_ptr<const TauKRule> make_tau_k(std::size_t n, std::size_t k, double p) {
  return std::make_shared<const TauKRule>(n, k, p);
}

std::shared_ptr<const ThresholdRule> make_classical_threshold(std::size_t n, std::size_t r) {
  return std::make_shared<const ThresholdRule>(n, r);
}

}  // namespace psec
