#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "psec/poset.hpp"
#include "psec/random.hpp"

namespace psec {

enum class Decision { wait, stop };

/// Rule name plus parameters, rendered as `name(key=value,...)`.
struct RuleDescriptor {
  std::string name;
  std::vector<std::pair<std::string, double>> params;

  std::string to_string() const;
};

/// One run's instance of a rule, after any private randomness has been drawn.
/// decide() is a pure function of the observed prefix.
class ActiveRule {
 public:
  virtual ~ActiveRule() = default;
  virtual Decision decide(const PrefixState& state, std::size_t n) const = 0;
};

/// Immutable rule configuration. Every run activates a private instance, so a
/// single StoppingRule can be shared across threads.
class StoppingRule {
 public:
  virtual ~StoppingRule() = default;
  virtual RuleDescriptor descriptor() const = 0;
  /// Whether activate() consumes draws from the stream.
  virtual bool randomized() const = 0;
  virtual std::unique_ptr<ActiveRule> activate(std::size_t n, RandomnessStream& rnd) const = 0;
};

using RulePtr = std::shared_ptr<const StoppingRule>;

/// Framework-level decision at time t = state.size(): STOP is forced at t = n.
Decision decide(const ActiveRule& rule, const PrefixState& state, std::size_t t, std::size_t n);

/// Reject the first X ~ Bin(n, p) arrivals, then accept the first arrival that
/// is maximal in an observed prefix with at most k maximal elements; accept
/// arrival n if nothing qualifies.
class TauKRule final : public StoppingRule {
 public:
  TauKRule(std::size_t n, std::size_t k, double p);

  RuleDescriptor descriptor() const override;
  bool randomized() const override { return true; }
  std::unique_ptr<ActiveRule> activate(std::size_t n, RandomnessStream& rnd) const override;

  /// Instance with a prescribed warm-up length.
  std::unique_ptr<ActiveRule> activate_with_skip(std::size_t skip) const;

  /// Inverse binomial CDF: min{x : P(Bin(n,p) <= x) >= u}.
  std::size_t skip_for_uniform(double u) const;

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  double p() const noexcept { return p_; }
  const std::vector<double>& binomial_cdf() const noexcept { return cdf_; }

 private:
  std::size_t n_;
  std::size_t k_;
  double p_;
  std::vector<double> cdf_;
};

/// Classical secretary rule: skip arrivals 1..r-1, then accept the first
/// arrival that is the unique maximal element of the prefix.
class ThresholdRule final : public StoppingRule {
 public:
  ThresholdRule(std::size_t n, std::size_t r);

  RuleDescriptor descriptor() const override;
  bool randomized() const override { return false; }
  std::unique_ptr<ActiveRule> activate(std::size_t n, RandomnessStream& rnd) const override;

  std::size_t r() const noexcept { return r_; }

 private:
  std::size_t n_;
  std::size_t r_;
};

/// Throws ParamError unless 0 < p < 1, k >= 1 and n >= 1.
std::shared_ptr<const TauKRule> make_tau_k(std::size_t n, std::size_t k, double p);
/// Throws ParamError unless 1 <= r <= n.
std::shared_ptr<const ThresholdRule> make_classical_threshold(std::size_t n, std::size_t r);

}  // namespace psec
