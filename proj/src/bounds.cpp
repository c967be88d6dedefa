#include "psec/bounds.hpp"

#include <cmath>
#include <numbers>

#include "psec/errors.hpp"

namespace psec {

namespace {

constexpr double kTermTolerance = 1e-15;
constexpr std::size_t kMaxTerms = 1'000'000;

void require_open_unit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParamError("p must lie in (0, 1)");
}

void require_k(std::size_t k) {
  if (k < 1) throw ParamError("k must be at least 1");
}

}  // namespace

double p_star(std::size_t k) {
  require_k(k);
  if (k == 1) return 1.0 / std::numbers::e;
  const double kd = static_cast<double>(k);
  return std::pow(1.0 / kd, 1.0 / (kd - 1.0));
}

double chain_lower_bound(std::size_t k, double p) {
  require_k(k);
  require_open_unit(p);
  if (k == 1) return -p * std::log(p);
  const double kd = static_cast<double>(k);
  return kd / (kd - 1.0) * p * (1.0 - std::pow(p, kd - 1.0));
}

double known_max_lower_bound(std::size_t k, double p) {
  require_k(k);
  require_open_unit(p);
  return static_cast<double>(k) * std::pow(p, static_cast<double>(k)) * -std::log(p);
}

double known_max_conditional_bound(double p) {
  require_open_unit(p);
  return p / (1.0 - p) * -std::log(p);
}

double known_max_event_probability(std::size_t k, double p) {
  require_k(k);
  require_open_unit(p);
  return static_cast<double>(k) * std::pow(p, static_cast<double>(k) - 1.0) * (1.0 - p);
}

double nb_identity_partial_sum(std::size_t k, double p, std::size_t s_max) {
  require_k(k);
  require_open_unit(p);
  const double q = 1.0 - p;
  double term = 1.0;  // s = 0
  double sum = term;
  for (std::size_t s = 0; s < s_max; ++s) {
    term *= static_cast<double>(k + s) / static_cast<double>(s + 1) * q;
    sum += term;
  }
  return sum;
}

double nb_identity_sum(std::size_t k, double p) {
  require_k(k);
  require_open_unit(p);
  const double q = 1.0 - p;
  double term = 1.0;
  double sum = term;
  for (std::size_t s = 0; s < kMaxTerms; ++s) {
    const double ratio = static_cast<double>(k + s) / static_cast<double>(s + 1) * q;
    term *= ratio;
    sum += term;
    if (ratio < 1.0 && term < kTermTolerance) break;
  }
  return sum;
}

VSeries v_series(std::size_t k, double p) {
  require_k(k);
  require_open_unit(p);
  VSeries out;
  const double kd = static_cast<double>(k);
  out.closed_form = k == 1 ? -std::log(p) : (std::pow(p, 1.0 - kd) - 1.0) / (kd - 1.0);

  // c_s = (1-p)^s C(k+s-2, k-1), c_1 = 1 - p; term_s = c_s / s.
  const double q = 1.0 - p;
  double c = q;
  double sum = 0.0;
  for (std::size_t s = 1; s <= kMaxTerms; ++s) {
    const double term = c / static_cast<double>(s);
    sum += term;
    out.terms = s;
    // c_{s+1} / c_s = q (k+s-1) / s
    const double ratio = q * static_cast<double>(k + s - 1) / static_cast<double>(s);
    c *= ratio;
    if (ratio < 1.0 && c / static_cast<double>(s + 1) < kTermTolerance) break;
  }
  out.truncated_series = sum;
  return out;
}

double YGameSpec::payoff(std::size_t t) const noexcept {
  return static_cast<double>(segment(t) + 1) / static_cast<double>(m);
}

double YGameSpec::payoff_probability(std::size_t t) const noexcept {
  const std::size_t s = segment(t);
  return s >= 3 ? 1.0 / (static_cast<double>(ell) * static_cast<double>(s - 2)) : 1.0;
}

namespace {

void validate(const YGameSpec& spec) {
  if (spec.k < 1 || spec.ell < 1) throw SpecError("Y-game needs k >= 1 and ell >= 1");
  if (spec.m < 3) throw SpecError("Y-game needs m >= 3");
}

}  // namespace

YGameSolution y_game_solve(const YGameSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n();
  YGameSolution sol;
  sol.v.assign(n + 2, 0.0);
  sol.v[n] = spec.payoff_probability(n) * spec.payoff(n);
  for (std::size_t t = n - 1; t >= 1; --t) {
    const double y = spec.payoff(t);
    const double next = sol.v[t + 1];
    if (y >= next) {
      const double pt = spec.payoff_probability(t);
      sol.v[t] = pt * y + (1.0 - pt) * next;
    } else {
      sol.v[t] = next;
      if (sol.last_rejected == 0) sol.last_rejected = t;
    }
  }
  sol.u_star = sol.last_rejected / (spec.k * spec.ell);
  sol.value = sol.v[1];
  return sol;
}

double y_game_threshold_value(const YGameSpec& spec, std::size_t u) {
  validate(spec);
  if (u >= spec.m) throw SpecError("threshold segment must lie in [0, m-1]");
  double survive = 1.0;  // P(all payoffs since k ell u were zero)
  double value = 0.0;
  for (std::size_t t = spec.k * spec.ell * u + 1; t <= spec.n(); ++t) {
    const double pt = spec.payoff_probability(t);
    value += survive * pt * spec.payoff(t);
    survive *= 1.0 - pt;
  }
  return value;
}

}  // namespace psec
