#include "psec/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "psec/errors.hpp"

namespace psec {

namespace {

constexpr double kTieTolerance = 1e-12;

void require_size(const Poset& poset, std::size_t limit, const char* what) {
  if (poset.size() > limit) {
    throw SizeError(std::string(what) + " supports at most " + std::to_string(limit) +
                    " elements, got " + std::to_string(poset.size()));
  }
}

struct RuleEnumerator {
  const Poset& poset;
  const ActiveRule& rule;
  std::size_t n;
  std::vector<ElementId> order;
  std::vector<std::uint8_t> used;
  std::uint64_t successes = 0;
  std::uint64_t nodes = 0;

  void visit(const PrefixState& state) {
    const std::size_t t = state.size();
    for (ElementId x = 0; x < n; ++x) {
      if (used[x]) continue;
      ++nodes;
      PrefixState next = state;
      observe_arrival(poset, std::span<const ElementId>(order).first(t), x, next);
      if (decide(rule, next, t + 1, n) == Decision::stop) {
        if (poset.is_maximal(x)) successes += factorial(n - t - 1);
        continue;
      }
      used[x] = 1;
      order[t] = x;
      visit(next);
      used[x] = 0;
    }
  }
};

struct TauEnumerator {
  std::size_t n;
  std::size_t k;
  std::vector<std::uint32_t> above;  // bitmask of elements above each element
  std::uint32_t all;
  std::uint64_t successes = 0;
  std::uint64_t nodes = 0;

  std::size_t maximal_count(std::uint32_t observed) const {
    std::size_t count = 0;
    for (std::uint32_t rest = observed; rest != 0; rest &= rest - 1) {
      const auto y = static_cast<std::size_t>(std::countr_zero(rest));
      if ((above[y] & observed) == 0) ++count;
    }
    return count;
  }

  void visit(std::uint32_t observed, std::size_t t) {
    for (std::uint32_t rest = all & ~observed; rest != 0; rest &= rest - 1) {
      const auto x = static_cast<std::size_t>(std::countr_zero(rest));
      const std::uint32_t next = observed | (std::uint32_t{1} << x);
      ++nodes;
      const bool last = t + 1 == n;
      const bool trigger = (above[x] & next) == 0 && maximal_count(next) <= k;
      if (last || trigger) {
        if (above[x] == 0) successes += factorial(n - t - 1);
        continue;
      }
      visit(next, t + 1);
    }
  }
};

class ActiveTable final : public ActiveRule {
 public:
  explicit ActiveTable(const StateTree& tree) : tree_(tree) {}

  Decision decide(const PrefixState& state, std::size_t n) const override {
    if (state.size() >= n) return Decision::stop;
    const StateNode* node = tree_.find(state.key());
    if (node == nullptr) throw ParamError("prefix state is not reachable in this poset");
    return node->stop ? Decision::stop : Decision::wait;
  }

 private:
  const StateTree& tree_;
};

}  // namespace

std::string_view method_name(ExactMethod method) {
  switch (method) {
    case ExactMethod::rule_enumeration: return "rule-enumeration";
    case ExactMethod::tau_subset_enumeration: return "tau-subset-enumeration";
    case ExactMethod::backward_induction: return "backward-induction";
  }
  return "unknown";
}

std::uint64_t factorial(std::size_t n) {
  if (n > 20) throw SizeError("factorial overflows 64 bits");
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

ExactResult exact_success_rule(const Poset& poset, const StoppingRule& rule) {
  require_size(poset, kMaxRuleEnumerationSize, "rule enumeration");
  if (rule.randomized()) {
    throw RandomRuleError("exact enumeration needs a deterministic rule; " +
                          rule.descriptor().to_string() + " draws private randomness");
  }
  const std::size_t n = poset.size();
  if (n == 0) return {0.0, ExactMethod::rule_enumeration, 0};
  RandomnessStream unused(0);
  const auto active = rule.activate(n, unused);
  RuleEnumerator e{poset, *active, n, std::vector<ElementId>(n), std::vector<std::uint8_t>(n, 0)};
  e.visit(PrefixState(n));
  return {static_cast<double>(e.successes) / static_cast<double>(factorial(n)),
          ExactMethod::rule_enumeration, e.nodes};
}

ExactResult exact_success_tau(const Poset& poset, std::size_t k, double p) {
  require_size(poset, kMaxTauEnumerationSize, "tau_k subset enumeration");
  if (!(p > 0.0 && p < 1.0)) throw ParamError("tau_k requires 0 < p < 1");
  if (k < 1) throw ParamError("tau_k requires k >= 1");
  const std::size_t n = poset.size();
  if (n == 0) return {0.0, ExactMethod::tau_subset_enumeration, 0};

  TauEnumerator e{n, k, std::vector<std::uint32_t>(n, 0), (std::uint32_t{1} << n) - 1};
  for (ElementId u = 0; u < n; ++u) {
    for (ElementId v = 0; v < n; ++v) {
      if (poset.precedes(u, v)) e.above[u] |= std::uint32_t{1} << v;
    }
  }

  double value = 0.0;
  for (std::uint32_t s = 0; s < e.all; ++s) {
    const auto size = static_cast<std::size_t>(std::popcount(s));
    e.successes = 0;
    e.visit(s, size);
    const double fraction =
        static_cast<double>(e.successes) / static_cast<double>(factorial(n - size));
    value += std::pow(p, static_cast<double>(size)) *
             std::pow(1.0 - p, static_cast<double>(n - size)) * fraction;
  }
  value += std::pow(p, static_cast<double>(n)) * static_cast<double>(poset.maximal_count()) /
           static_cast<double>(n);
  return {value, ExactMethod::tau_subset_enumeration, e.nodes + 1};
}

// ---------------------------------------------------------------------------
// Backward induction

StateTree StateTree::build(const Poset& poset) {
  require_size(poset, kMaxBackwardInductionSize, "backward induction");
  StateTree tree;
  const std::size_t n = poset.size();
  tree.n_ = n;
  tree.levels_.assign(n + 1, {});
  if (n == 0) return tree;

  std::vector<ElementId> order(n);
  std::vector<std::uint8_t> used(n, 0);
  std::vector<std::uint8_t> codes;
  codes.reserve(n * n / 2);

  // Keys grow by one row of pair codes per arrival, so the DFS keeps a single
  // code buffer and packs it at each node.
  auto visit = [&](auto&& self, std::size_t t, std::uint32_t parent) -> void {
    for (ElementId x = 0; x < n; ++x) {
      if (used[x]) continue;
      for (std::size_t j = 0; j < t; ++j) {
        PairRelation r = PairRelation::incomparable;
        if (poset.precedes(x, order[j])) r = PairRelation::below;
        else if (poset.precedes(order[j], x)) r = PairRelation::above;
        codes.push_back(static_cast<std::uint8_t>(r));
      }
      std::string key = pack_state_key(t + 1, codes);
      auto [it, inserted] = tree.index_.try_emplace(std::move(key), 0);
      if (inserted) {
        it->second = static_cast<std::uint32_t>(tree.nodes_.size());
        StateNode node;
        node.key = it->first;
        node.t = static_cast<std::uint32_t>(t + 1);
        node.parent = parent;
        tree.nodes_.push_back(std::move(node));
        tree.levels_[t + 1].push_back(it->second);
        if (parent != StateNode::kNoParent) tree.nodes_[parent].children.push_back(it->second);
      }
      const std::uint32_t id = it->second;
      StateNode& node = tree.nodes_[id];
      ++node.sequences;
      if (poset.is_maximal(x)) ++node.wins;
      if (t + 1 < n) {
        used[x] = 1;
        order[t] = x;
        self(self, t + 1, id);
        used[x] = 0;
      }
      codes.resize(codes.size() - t);
    }
  };
  visit(visit, 0, StateNode::kNoParent);

  for (std::size_t t = n; t >= 1; --t) {
    for (std::uint32_t id : tree.levels_[t]) {
      StateNode& node = tree.nodes_[id];
      node.z = static_cast<double>(node.wins) / static_cast<double>(node.sequences);
      if (t == n) {
        node.continuation = 0.0;
        node.gamma = node.z;
        node.stop = true;
        continue;
      }
      double acc = 0.0;
      for (std::uint32_t c : node.children) {
        const StateNode& child = tree.nodes_[c];
        acc += static_cast<double>(child.sequences) * child.gamma;
      }
      node.continuation =
          acc / (static_cast<double>(node.sequences) * static_cast<double>(n - t));
      node.gamma = std::max(node.z, node.continuation);
      node.stop = node.z >= node.continuation - kTieTolerance;
    }
  }

  double acc = 0.0;
  for (std::uint32_t id : tree.levels_[1]) {
    acc += static_cast<double>(tree.nodes_[id].sequences) * tree.nodes_[id].gamma;
  }
  tree.value_ = acc / static_cast<double>(n);
  return tree;
}

const StateNode* StateTree::find(std::string_view key) const {
  const auto it = index_.find(std::string(key));
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

OptimalTableRule::OptimalTableRule(std::size_t n, std::shared_ptr<const StateTree> tree)
    : n_(n), tree_(std::move(tree)) {}

std::unique_ptr<ActiveRule> OptimalTableRule::activate(std::size_t n, RandomnessStream&) const {
  if (n != n_) throw ParamError("optimal table built for a different poset size");
  return std::make_unique<ActiveTable>(*tree_);
}

std::shared_ptr<const OptimalTableRule> OptimalSolution::rule() const {
  return std::make_shared<const OptimalTableRule>(tree->n(), tree);
}

nlohmann::json OptimalSolution::table_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t t = 1; t <= tree->n(); ++t) {
    for (std::uint32_t id : tree->level(t)) {
      const StateNode& node = tree->nodes()[id];
      rows.push_back({{"state_key", to_hex(node.key)},
                      {"t", node.t},
                      {"z", node.z},
                      {"gamma", node.gamma},
                      {"stop", node.stop}});
    }
  }
  return rows;
}

OptimalSolution optimal_value(const Poset& poset) {
  auto tree = std::make_shared<const StateTree>(StateTree::build(poset));
  return {{tree->value(), ExactMethod::backward_induction, tree->nodes().size()}, tree};
}

std::map<std::string, double> state_z_values(const Poset& poset) {
  const StateTree tree = StateTree::build(poset);
  std::map<std::string, double> out;
  for (const StateNode& node : tree.nodes()) out.emplace(node.key, node.z);
  return out;
}

}  // namespace psec
