#include "psec/generators.hpp"

#include <cstdio>
#include <numeric>

#include "psec/errors.hpp"
#include "psec/random.hpp"

namespace psec {

namespace {

void require_positive(std::size_t value, const char* what) {
  if (value == 0) throw SpecError(std::string(what) + " must be positive");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

FamilySpec FamilySpec::disjoint_chains(std::size_t k, std::size_t x) {
  FamilySpec s;
  s.kind = Family::disjoint_chains;
  s.k = k;
  s.x = x;
  return s;
}

FamilySpec FamilySpec::linear(std::size_t n) {
  FamilySpec s;
  s.kind = Family::linear;
  s.n = n;
  return s;
}

FamilySpec FamilySpec::antichain(std::size_t n) {
  FamilySpec s;
  s.kind = Family::antichain;
  s.n = n;
  return s;
}

FamilySpec FamilySpec::binary_tree(std::size_t depth) {
  FamilySpec s;
  s.kind = Family::binary_tree;
  s.depth = depth;
  return s;
}

FamilySpec FamilySpec::twins(std::size_t levels) {
  FamilySpec s;
  s.kind = Family::twins;
  s.levels = levels;
  return s;
}

FamilySpec FamilySpec::random(std::size_t n, double density, std::uint64_t seed) {
  FamilySpec s;
  s.kind = Family::random;
  s.n = n;
  s.density = density;
  s.seed = seed;
  return s;
}

std::string FamilySpec::describe() const {
  const std::string name(family_name(kind));
  switch (kind) {
    case Family::disjoint_chains:
      return name + "(k=" + std::to_string(k) + ",x=" + std::to_string(x) + ")";
    case Family::linear:
    case Family::antichain:
      return name + "(n=" + std::to_string(n) + ")";
    case Family::binary_tree:
      return name + "(depth=" + std::to_string(depth) + ")";
    case Family::twins:
      return name + "(levels=" + std::to_string(levels) + ")";
    case Family::random:
      return name + "(n=" + std::to_string(n) + ",density=" + format_double(density) +
             ",seed=" + std::to_string(seed) + ")";
  }
  return name;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::disjoint_chains: return "disjoint_chains";
    case Family::linear: return "linear";
    case Family::antichain: return "antichain";
    case Family::binary_tree: return "binary_tree";
    case Family::twins: return "twins";
    case Family::random: return "random";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::disjoint_chains, Family::linear, Family::antichain, Family::binary_tree,
                   Family::twins, Family::random}) {
    if (family_name(f) == name) return f;
  }
  throw SpecError("unknown poset family `" + std::string(name) + "`");
}

Poset make_family(const FamilySpec& spec) {
  switch (spec.kind) {
    case Family::disjoint_chains: return disjoint_chains(spec.k, spec.x);
    case Family::linear: return linear_order(spec.n);
    case Family::antichain: return antichain(spec.n);
    case Family::binary_tree: return binary_tree(spec.depth);
    case Family::twins: return twins(spec.levels);
    case Family::random: return random_poset(spec.n, spec.density, spec.seed);
  }
  throw SpecError("unknown poset family");
}

Poset disjoint_chains(std::size_t k, std::size_t x) {
  require_positive(k, "chain count k");
  require_positive(x, "chain length x");
  std::vector<Comparison> pairs;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 0; j + 1 < x; ++j) {
      const auto id = static_cast<ElementId>(c * x + j);
      pairs.push_back({id, id + 1});
    }
  }
  return Poset::from_relations(k * x, pairs);
}

Poset linear_order(std::size_t n) {
  require_positive(n, "n");
  return disjoint_chains(1, n);
}

Poset antichain(std::size_t n) {
  require_positive(n, "n");
  return Poset::from_relations(n, {});
}

Poset binary_tree(std::size_t depth) {
  require_positive(depth, "depth");
  if (depth > 24) throw SpecError("binary tree depth too large");
  const std::size_t n = (std::size_t{1} << depth) - 1;
  std::vector<Comparison> pairs;
  for (std::size_t i = 0; 2 * i + 2 < n; ++i) {
    pairs.push_back({static_cast<ElementId>(2 * i + 1), static_cast<ElementId>(i)});
    pairs.push_back({static_cast<ElementId>(2 * i + 2), static_cast<ElementId>(i)});
  }
  return Poset::from_relations(n, pairs);
}

Poset twins(std::size_t levels) {
  require_positive(levels, "levels");
  std::vector<Comparison> pairs;
  for (std::size_t lv = 0; lv + 1 < levels; ++lv) {
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        pairs.push_back({static_cast<ElementId>(2 * lv + a), static_cast<ElementId>(2 * lv + 2 + b)});
      }
    }
  }
  return Poset::from_relations(2 * levels, pairs);
}

Poset random_poset(std::size_t n, double density, std::uint64_t seed) {
  require_positive(n, "n");
  if (!(density >= 0.0 && density <= 1.0)) throw SpecError("density must lie in [0, 1]");
  RandomnessStream rng(seed);
  std::vector<Comparison> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < density) pairs.push_back({static_cast<ElementId>(i), static_cast<ElementId>(j)});
    }
  }
  std::vector<ElementId> mapping(n);
  std::iota(mapping.begin(), mapping.end(), ElementId{0});
  rng.shuffle(std::span<ElementId>(mapping));
  return Poset::from_relations(n, pairs).relabeled(mapping);
}

}  // namespace psec
