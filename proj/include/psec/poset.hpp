#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psec {

using ElementId = std::uint32_t;

/// `lower` ≺ `upper`.
struct Comparison {
  ElementId lower;
  ElementId upper;
  friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// Finite strict partial order on ids 0..n-1, stored as its transitive closure
/// (one bit row per element listing the elements strictly above it).
class Poset {
 public:
  Poset() = default;

  /// Transitive closure of `pairs`. Throws CycleError when the closure is not
  /// antisymmetric and ParamError on ids outside [0, n).
  static Poset from_relations(std::size_t n, std::span<const Comparison> pairs);

  std::size_t size() const noexcept { return n_; }

  bool precedes(ElementId u, ElementId v) const noexcept {
    return (rows_[u * stride_ + (v >> 6)] >> (v & 63)) & 1U;
  }
  bool comparable(ElementId u, ElementId v) const noexcept {
    return precedes(u, v) || precedes(v, u);
  }

  const std::vector<ElementId>& maximal_elements() const noexcept { return maximal_; }
  bool is_maximal(ElementId u) const noexcept { return is_maximal_[u] != 0; }
  std::size_t maximal_count() const noexcept { return maximal_.size(); }

  /// Every pair of the closure, ordered by (lower, upper).
  std::vector<Comparison> comparisons() const;
  /// Hasse diagram edges: u ≺ v with nothing strictly between.
  std::vector<Comparison> cover_relations() const;

  /// Poset with element u renamed to mapping[u]; mapping must be a permutation.
  Poset relabeled(std::span<const ElementId> mapping) const;

  /// Row-major n*n 0/1 matrix of the relation.
  std::vector<std::uint8_t> matrix() const;

  friend bool operator==(const Poset& a, const Poset& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }

 private:
  void finalize();

  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> rows_;
  std::vector<ElementId> maximal_;
  std::vector<std::uint8_t> is_maximal_;
};

/// Checks irreflexivity, transitivity and antisymmetry of a row-major matrix.
bool is_strict_partial_order(std::size_t n, std::span<const std::uint8_t> matrix);

struct ChainCover {
  std::vector<std::vector<ElementId>> chains;
};

struct WidthResult {
  std::size_t width = 0;
  ChainCover cover;
  /// A maximum antichain, recovered from the matching through König's theorem.
  std::vector<ElementId> antichain;
};

/// Minimum chain partition via maximum bipartite matching on the split
/// comparability graph; width = n - |matching| by Dilworth's theorem.
WidthResult width_and_chain_cover(const Poset& poset);

bool is_chain_cover(const Poset& poset, const ChainCover& cover);
bool is_antichain(const Poset& poset, std::span<const ElementId> elements);

/// Relation of a newly observed arrival to one earlier arrival.
enum class PairRelation : std::uint8_t {
  incomparable = 0,
  below = 1,  // new ≺ earlier
  above = 2,  // earlier ≺ new
};

/// The labeled poset induced by the first t arrivals: arrival indices 0..t-1,
/// with i ≺_t j iff the elements that arrived at positions i and j compare so.
/// Element identities are not retained.
class PrefixState {
 public:
  PrefixState() = default;
  explicit PrefixState(std::size_t capacity) { reserve(capacity); }

  std::size_t size() const noexcept { return t_; }

  bool precedes(std::size_t i, std::size_t j) const noexcept {
    return (rows_[i * stride_ + (j >> 6)] >> (j & 63)) & 1U;
  }
  bool is_maximal(std::size_t i) const noexcept { return is_maximal_[i] != 0; }
  std::size_t maximal_count() const noexcept { return maximal_count_; }
  /// Whether the most recent arrival is maximal in the prefix; false when empty.
  bool current_is_maximal() const noexcept { return t_ > 0 && is_maximal(t_ - 1); }
  std::vector<std::size_t> maximal_arrivals() const;

  /// Appends arrival t; `to_earlier[j]` relates it to arrival j < t. The caller
  /// guarantees the extension is still a strict partial order.
  void extend(std::span<const PairRelation> to_earlier);

  void reserve(std::size_t capacity);

  /// Serialized atom key: 2-byte big-endian t followed by one 2-bit
  /// PairRelation code per pair (i, j), j < i, in order of increasing i then j,
  /// packed most significant bits first. The key of a prefix is a bit prefix
  /// of the key of every extension (after the length bytes).
  std::string key() const;
  std::string key_hex() const;
  /// Inverse of key(); throws ParseError on malformed or non-order input.
  static PrefixState from_key(std::string_view key);

  std::vector<std::uint8_t> matrix() const;

  friend bool operator==(const PrefixState& a, const PrefixState& b);

 private:
  std::size_t t_ = 0;
  std::size_t capacity_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> rows_;
  std::vector<std::uint8_t> is_maximal_;
  std::size_t maximal_count_ = 0;
};

/// Packs a length and 2-bit pair codes into the PrefixState key layout.
std::string pack_state_key(std::size_t t, std::span<const std::uint8_t> pair_codes);
std::string to_hex(std::string_view bytes);

/// Appends the element `next` to `state`, where `earlier` lists the elements
/// already observed, in arrival order.
void observe_arrival(const Poset& poset, std::span<const ElementId> earlier, ElementId next,
                     PrefixState& state);

/// P_t for the arrival order `order` (a permutation of 0..n-1), 1 <= t <= n.
PrefixState induced_prefix(const Poset& poset, std::span<const ElementId> order, std::size_t t);

bool is_permutation_of_ids(std::span<const ElementId> order, std::size_t n);

/// One representative per isomorphism class of posets on n <= 6 elements; the
/// representative's matrix is the lexicographic minimum over all relabelings.
/// Throws SizeError for n > 6.
std::vector<Poset> enumerate_all_posets(std::size_t n);

/// Lexicographically minimal row-major relation bit string over all n!
/// relabelings (n <= 8), as an integer with entry (0,0) most significant.
std::uint64_t canonical_code(const Poset& poset);

// Text format: `#` comments, a `poset <n>` header line, then `<u> < <v>` lines.
Poset parse_poset(std::istream& in);
Poset parse_poset_string(std::string_view text);
Poset read_poset_file(const std::string& path);
/// Writes the header plus the cover relations.
void write_poset(std::ostream& out, const Poset& poset, std::string_view comment = {});
std::string format_poset(const Poset& poset, std::string_view comment = {});

}  // namespace psec
