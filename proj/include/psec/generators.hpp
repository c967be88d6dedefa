#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "psec/poset.hpp"

namespace psec {

enum class Family { disjoint_chains, linear, antichain, binary_tree, twins, random };

/// Parameters of one poset family. Only the fields the family uses are read:
/// disjoint_chains(k, x), linear(n), antichain(n), binary_tree(depth),
/// twins(levels), random(n, density, seed).
struct FamilySpec {
  Family kind = Family::linear;
  std::size_t k = 1;
  std::size_t x = 1;
  std::size_t n = 1;
  std::size_t depth = 1;
  std::size_t levels = 1;
  double density = 0.5;
  std::uint64_t seed = 0;

  static FamilySpec disjoint_chains(std::size_t k, std::size_t x);
  static FamilySpec linear(std::size_t n);
  static FamilySpec antichain(std::size_t n);
  static FamilySpec binary_tree(std::size_t depth);
  static FamilySpec twins(std::size_t levels);
  static FamilySpec random(std::size_t n, double density, std::uint64_t seed);

  /// e.g. `disjoint_chains(k=3,x=5)`.
  std::string describe() const;
};

std::string_view family_name(Family f);
/// Throws SpecError for unknown names.
Family parse_family(std::string_view name);

/// Throws SpecError on nonpositive sizes or density outside [0, 1].
Poset make_family(const FamilySpec& spec);

// Layouts:
//   disjoint_chains: chain c holds c*x .. c*x+x-1 in increasing order.
//   binary_tree: heap numbering, node i covers 2i+1 and 2i+2, root 0 on top.
//   twins: level i is {2i, 2i+1}; both lie below both elements of level i+1.
Poset disjoint_chains(std::size_t k, std::size_t x);
Poset linear_order(std::size_t n);
Poset antichain(std::size_t n);
Poset binary_tree(std::size_t depth);
Poset twins(std::size_t levels);
Poset random_poset(std::size_t n, double density, std::uint64_t seed);

}  // namespace psec
