#include <algorithm>
#include <numeric>
#include <set>

#include "psec/errors.hpp"
#include "psec/poset.hpp"

namespace psec {

namespace {

std::uint64_t code_under(const std::vector<std::uint8_t>& m, std::size_t n,
                         const std::vector<ElementId>& perm) {
  // Entry (i, j) of the relabeled matrix is m[perm[i]][perm[j]].
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) code = (code << 1) | m[perm[i] * n + perm[j]];
  }
  return code;
}

std::uint64_t canonical_code_of(const std::vector<std::uint8_t>& m, std::size_t n) {
  std::vector<ElementId> perm(n);
  std::iota(perm.begin(), perm.end(), ElementId{0});
  std::uint64_t best = ~std::uint64_t{0};
  do {
    best = std::min(best, code_under(m, n, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Poset poset_from_code(std::uint64_t code, std::size_t n) {
  std::vector<Comparison> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t bit = n * n - 1 - (i * n + j);
      if ((code >> bit) & 1U) pairs.push_back({static_cast<ElementId>(i), static_cast<ElementId>(j)});
    }
  }
  return Poset::from_relations(n, pairs);
}

}  // namespace

std::uint64_t canonical_code(const Poset& poset) {
  if (poset.size() > 8) throw SizeError("canonical form supports at most 8 elements");
  return canonical_code_of(poset.matrix(), poset.size());
}

std::vector<Poset> enumerate_all_posets(std::size_t n) {
  if (n > 6) throw SizeError("poset enumeration supports at most 6 elements");
  // Every poset has a natural labeling, so it suffices to scan relations
  // contained in {(i, j) : i < j} and keep the transitive ones.
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  }
  std::set<std::uint64_t> classes;
  std::vector<std::uint8_t> m(n * n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::fill(m.begin(), m.end(), 0);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if ((mask >> s) & 1U) m[slots[s].first * n + slots[s].second] = 1;
    }
    bool transitive = true;
    for (std::size_t u = 0; u < n && transitive; ++u) {
      for (std::size_t v = u + 1; v < n && transitive; ++v) {
        if (!m[u * n + v]) continue;
        for (std::size_t w = v + 1; w < n; ++w) {
          if (m[v * n + w] && !m[u * n + w]) {
            transitive = false;
            break;
          }
        }
      }
    }
    if (transitive) classes.insert(canonical_code_of(m, n));
  }
  std::vector<Poset> out;
  out.reserve(classes.size());
  for (std::uint64_t code : classes) out.push_back(poset_from_code(code, n));
  return out;
}

}  // namespace psec
