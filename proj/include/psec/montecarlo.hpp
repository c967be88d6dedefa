#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "psec/generators.hpp"
#include "psec/poset.hpp"
#include "psec/strategies.hpp"

namespace psec {

inline constexpr double kWilsonZ95 = 1.959963984540054;

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
  /// Half-width divided by z.
  double standard_error = 0.0;
};

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z = kWilsonZ95);

struct SuccessReport {
  std::string poset;
  std::size_t n = 0;
  std::size_t k_max = 0;
  std::size_t width = 0;
  std::string rule;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double standard_error = 0.0;
  std::uint64_t seed = 0;
};

/// One uniformly random arrival order (stream split(trial_seed, 0)) and one
/// activation of `rule` (stream split(trial_seed, 1)). True iff the accepted
/// element is maximal in `poset`.
bool run_trial(const Poset& poset, const StoppingRule& rule, std::uint64_t trial_seed);

/// Trial i uses seed split_seed(master_seed, i). Counts are summed per worker
/// and reduced, so the report does not depend on `threads` (0 = hardware).
SuccessReport estimate_success(const Poset& poset, const StoppingRule& rule, std::uint64_t trials,
                               std::uint64_t master_seed, unsigned threads = 0,
                               std::string poset_name = {});

/// Rule recipe instantiated per poset (tau_k needs n).
struct RuleSpec {
  enum class Kind { tau_k, threshold } kind = Kind::tau_k;
  std::size_t k = 1;
  double p = 0.5;
  std::size_t r = 1;

  RulePtr instantiate(std::size_t n) const;
};

/// Cell (i, j) estimates rule j on poset i with master seed
/// split_seed(master_seed, i * rules.size() + j). Throws ParamError on empty grids.
std::vector<SuccessReport> sweep(const std::vector<FamilySpec>& posets,
                                 const std::vector<RuleSpec>& rules, std::uint64_t trials,
                                 std::uint64_t master_seed, unsigned threads = 0);

/// Header: poset,n,k_max,width,rule,trials,successes,estimate,ci_low,ci_high,seed
void write_reports_csv(std::ostream& out, const std::vector<SuccessReport>& reports);
nlohmann::json reports_json(const std::vector<SuccessReport>& reports);

/// 12 significant digits, the fixed precision of all numeric output.
std::string format_number(double value);

}  // namespace psec
