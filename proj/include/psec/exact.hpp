#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "psec/poset.hpp"
#include "psec/strategies.hpp"

namespace psec {

enum class ExactMethod { rule_enumeration, tau_subset_enumeration, backward_induction };

std::string_view method_name(ExactMethod method);

struct ExactResult {
  double value = 0.0;
  ExactMethod method = ExactMethod::rule_enumeration;
  /// Enumeration nodes visited (rule / subset methods) or DP states built.
  std::uint64_t work = 0;
};

inline constexpr std::size_t kMaxRuleEnumerationSize = 9;
inline constexpr std::size_t kMaxTauEnumerationSize = 8;
inline constexpr std::size_t kMaxBackwardInductionSize = 9;

std::uint64_t factorial(std::size_t n);

/// Success probability of a deterministic rule, averaged over all n! arrival
/// orders. Throws SizeError for n > 9 and RandomRuleError for randomized rules.
ExactResult exact_success_rule(const Poset& poset, const StoppingRule& rule);

/// Success probability of tau_k(p), n <= 8. The warm-up set S is an
/// independent p-coin per element; given S the trigger only depends on the
/// observed set, so each S contributes p^|S| (1-p)^(n-|S|) times the fraction
/// of orderings of the remaining elements that end on a maximal element. The
/// S = P term accepts arrival n, which is maximal with probability |max P| / n.
ExactResult exact_success_tau(const Poset& poset, std::size_t k, double p);

/// One atom of F_t: all arrival prefixes of length t inducing the same
/// labeled poset.
struct StateNode {
  static constexpr std::uint32_t kNoParent = ~std::uint32_t{0};

  std::string key;  ///< PrefixState::key()
  std::uint32_t t = 0;
  std::uint32_t parent = kNoParent;
  /// Number of length-t arrival sequences in the atom; each extends to
  /// (n - t)! full permutations.
  std::uint64_t sequences = 0;
  /// Sequences whose t-th arrival is maximal in the full poset.
  std::uint64_t wins = 0;
  double z = 0.0;
  double continuation = 0.0;  ///< E(gamma_{t+1} | atom); 0 at t = n
  double gamma = 0.0;
  bool stop = false;
  std::vector<std::uint32_t> children;
};

/// Backward-induction tree over the atoms of F_1..F_n.
class StateTree {
 public:
  /// Throws SizeError for n > 9.
  static StateTree build(const Poset& poset);

  std::size_t n() const noexcept { return n_; }
  const std::vector<StateNode>& nodes() const noexcept { return nodes_; }
  /// Node ids at depth t (1..n).
  const std::vector<std::uint32_t>& level(std::size_t t) const { return levels_.at(t); }
  /// Number of full permutations passing through the node.
  std::uint64_t weight(const StateNode& node) const { return node.sequences * factorial(n_ - node.t); }
  const StateNode* find(std::string_view key) const;

  /// E(gamma_1).
  double value() const noexcept { return value_; }

 private:
  std::size_t n_ = 0;
  std::vector<StateNode> nodes_;
  std::vector<std::vector<std::uint32_t>> levels_;
  std::unordered_map<std::string, std::uint32_t> index_;
  double value_ = 0.0;
};

/// Deterministic rule that stops exactly on atoms flagged `stop`: the first t
/// with Z_t = gamma_t.
class OptimalTableRule final : public StoppingRule {
 public:
  OptimalTableRule(std::size_t n, std::shared_ptr<const StateTree> tree);

  RuleDescriptor descriptor() const override { return {"optimal_table", {}}; }
  bool randomized() const override { return false; }
  std::unique_ptr<ActiveRule> activate(std::size_t n, RandomnessStream& rnd) const override;

 private:
  std::size_t n_;
  std::shared_ptr<const StateTree> tree_;
};

struct OptimalSolution {
  ExactResult result;
  std::shared_ptr<const StateTree> tree;

  std::shared_ptr<const OptimalTableRule> rule() const;
  /// [{state_key (hex), t, z, gamma, stop}, ...] ordered by t then discovery.
  nlohmann::json table_json() const;
};

/// Sup over stopping times of P(accepted element is maximal), n <= 9.
OptimalSolution optimal_value(const Poset& poset);

/// Z_t for every reachable atom, keyed by PrefixState::key().
std::map<std::string, double> state_z_values(const Poset& poset);

}  // namespace psec
