#include "psec/poset.hpp"

#include <algorithm>
#include <bit>
#include <queue>

#include "psec/errors.hpp"

namespace psec {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

Poset Poset::from_relations(std::size_t n, std::span<const Comparison> pairs) {
  Poset p;
  p.n_ = n;
  p.stride_ = words_for(n);
  p.rows_.assign(n * p.stride_, 0);
  for (const auto& [u, v] : pairs) {
    if (u >= n || v >= n) {
      throw ParamError("relation " + std::to_string(u) + " < " + std::to_string(v) +
                       " references an element outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
    }
    if (u == v) throw CycleError("self-relation on element " + std::to_string(u));
    p.rows_[u * p.stride_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
  }
  // Warshall on bit rows.
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t* row_k = &p.rows_[k * p.stride_];
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t* row_i = &p.rows_[i * p.stride_];
      if ((row_i[k >> 6] >> (k & 63)) & 1U) {
        for (std::size_t w = 0; w < p.stride_; ++w) row_i[w] |= row_k[w];
      }
    }
  }
  for (ElementId u = 0; u < n; ++u) {
    if (p.precedes(u, u)) {
      throw CycleError("relations contain a cycle through element " + std::to_string(u));
    }
  }
  p.finalize();
  return p;
}

void Poset::finalize() {
  maximal_.clear();
  is_maximal_.assign(n_, 0);
  for (ElementId u = 0; u < n_; ++u) {
    const auto* row = &rows_[u * stride_];
    if (std::all_of(row, row + stride_, [](std::uint64_t w) { return w == 0; })) {
      maximal_.push_back(u);
      is_maximal_[u] = 1;
    }
  }
}

std::vector<Comparison> Poset::comparisons() const {
  std::vector<Comparison> out;
  for (ElementId u = 0; u < n_; ++u) {
    for (ElementId v = 0; v < n_; ++v) {
      if (precedes(u, v)) out.push_back({u, v});
    }
  }
  return out;
}

std::vector<Comparison> Poset::cover_relations() const {
  std::vector<Comparison> out;
  for (ElementId u = 0; u < n_; ++u) {
    for (ElementId v = 0; v < n_; ++v) {
      if (!precedes(u, v)) continue;
      bool covered = true;
      for (ElementId w = 0; w < n_ && covered; ++w) {
        if (precedes(u, w) && precedes(w, v)) covered = false;
      }
      if (covered) out.push_back({u, v});
    }
  }
  return out;
}

Poset Poset::relabeled(std::span<const ElementId> mapping) const {
  if (!is_permutation_of_ids(mapping, n_)) throw ParamError("relabeling is not a permutation");
  Poset p;
  p.n_ = n_;
  p.stride_ = stride_;
  p.rows_.assign(rows_.size(), 0);
  for (ElementId u = 0; u < n_; ++u) {
    for (ElementId v = 0; v < n_; ++v) {
      if (precedes(u, v)) {
        const ElementId a = mapping[u];
        const ElementId b = mapping[v];
        p.rows_[a * stride_ + (b >> 6)] |= std::uint64_t{1} << (b & 63);
      }
    }
  }
  p.finalize();
  return p;
}

std::vector<std::uint8_t> Poset::matrix() const {
  std::vector<std::uint8_t> m(n_ * n_, 0);
  for (ElementId u = 0; u < n_; ++u) {
    for (ElementId v = 0; v < n_; ++v) m[u * n_ + v] = precedes(u, v) ? 1 : 0;
  }
  return m;
}

bool is_strict_partial_order(std::size_t n, std::span<const std::uint8_t> m) {
  if (m.size() != n * n) return false;
  for (std::size_t u = 0; u < n; ++u) {
    if (m[u * n + u]) return false;
    for (std::size_t v = 0; v < n; ++v) {
      if (!m[u * n + v]) continue;
      if (m[v * n + u]) return false;
      for (std::size_t w = 0; w < n; ++w) {
        if (m[v * n + w] && !m[u * n + w]) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Width

WidthResult width_and_chain_cover(const Poset& poset) {
  const std::size_t n = poset.size();
  constexpr ElementId kNone = ~ElementId{0};

  std::vector<std::vector<ElementId>> succ(n);
  for (ElementId u = 0; u < n; ++u) {
    for (ElementId v = 0; v < n; ++v) {
      if (poset.precedes(u, v)) succ[u].push_back(v);
    }
  }

  // match_right[v] = left vertex matched to v; match_left[u] = right vertex.
  std::vector<ElementId> match_left(n, kNone);
  std::vector<ElementId> match_right(n, kNone);
  std::vector<std::uint32_t> seen(n, 0);
  std::uint32_t stamp = 0;

  // Kuhn's augmenting paths, iterative to avoid deep recursion on long chains.
  auto augment = [&](ElementId root) {
    ++stamp;
    struct Frame {
      ElementId u;
      std::size_t next;
    };
    std::vector<Frame> stack{{root, 0}};
    std::vector<ElementId> via;  // right vertex taken from each frame
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == succ[f.u].size()) {
        stack.pop_back();
        if (!via.empty()) via.pop_back();
        continue;
      }
      const ElementId v = succ[f.u][f.next++];
      if (seen[v] == stamp) continue;
      seen[v] = stamp;
      if (match_right[v] == kNone) {
        via.push_back(v);
        // Flip the path: frame i took right vertex via[i].
        for (std::size_t i = 0; i < stack.size(); ++i) {
          match_left[stack[i].u] = via[i];
          match_right[via[i]] = stack[i].u;
        }
        return true;
      }
      via.push_back(v);
      stack.push_back({match_right[v], 0});
    }
    return false;
  };

  std::size_t matched = 0;
  for (ElementId u = 0; u < n; ++u) {
    if (augment(u)) ++matched;
  }

  WidthResult result;
  result.width = n - matched;
  for (ElementId u = 0; u < n; ++u) {
    if (match_right[u] != kNone) continue;  // u continues some chain
    std::vector<ElementId> chain{u};
    for (ElementId cur = u; match_left[cur] != kNone;) {
      cur = match_left[cur];
      chain.push_back(cur);
    }
    result.cover.chains.push_back(std::move(chain));
  }

  // König: alternating reachability from unmatched left vertices.
  std::vector<std::uint8_t> reach_left(n, 0);
  std::vector<std::uint8_t> reach_right(n, 0);
  std::queue<ElementId> frontier;
  for (ElementId u = 0; u < n; ++u) {
    if (match_left[u] == kNone) {
      reach_left[u] = 1;
      frontier.push(u);
    }
  }
  while (!frontier.empty()) {
    const ElementId u = frontier.front();
    frontier.pop();
    for (ElementId v : succ[u]) {
      if (reach_right[v] || match_left[u] == v) continue;
      reach_right[v] = 1;
      const ElementId w = match_right[v];
      if (w != kNone && !reach_left[w]) {
        reach_left[w] = 1;
        frontier.push(w);
      }
    }
  }
  for (ElementId x = 0; x < n; ++x) {
    if (reach_left[x] && !reach_right[x]) result.antichain.push_back(x);
  }
  return result;
}

bool is_chain_cover(const Poset& poset, const ChainCover& cover) {
  std::vector<std::uint8_t> used(poset.size(), 0);
  std::size_t total = 0;
  for (const auto& chain : cover.chains) {
    if (chain.empty()) return false;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const ElementId x = chain[i];
      if (x >= poset.size() || used[x]) return false;
      used[x] = 1;
      ++total;
      if (i > 0 && !poset.precedes(chain[i - 1], x)) return false;
    }
  }
  return total == poset.size();
}

bool is_antichain(const Poset& poset, std::span<const ElementId> elements) {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      if (elements[i] == elements[j] || poset.comparable(elements[i], elements[j])) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// PrefixState

void PrefixState::reserve(std::size_t capacity) {
  if (capacity <= capacity_) return;
  const std::size_t stride = words_for(capacity);
  if (stride != stride_) {
    std::vector<std::uint64_t> rows(capacity * stride, 0);
    for (std::size_t i = 0; i < t_; ++i) {
      std::copy_n(&rows_[i * stride_], stride_, &rows[i * stride]);
    }
    rows_ = std::move(rows);
    stride_ = stride;
  } else {
    rows_.resize(capacity * stride_, 0);
  }
  is_maximal_.resize(capacity, 0);
  capacity_ = capacity;
}

void PrefixState::extend(std::span<const PairRelation> to_earlier) {
  if (to_earlier.size() != t_) throw ParamError("extension must relate to every earlier arrival");
  if (t_ == capacity_) reserve(std::max<std::size_t>(8, capacity_ * 2));
  const std::size_t a = t_;
  std::uint64_t* row_a = &rows_[a * stride_];
  std::fill_n(row_a, stride_, 0);
  bool maximal = true;
  for (std::size_t j = 0; j < a; ++j) {
    switch (to_earlier[j]) {
      case PairRelation::below:
        row_a[j >> 6] |= std::uint64_t{1} << (j & 63);
        maximal = false;
        break;
      case PairRelation::above:
        rows_[j * stride_ + (a >> 6)] |= std::uint64_t{1} << (a & 63);
        if (is_maximal_[j]) {
          is_maximal_[j] = 0;
          --maximal_count_;
        }
        break;
      case PairRelation::incomparable:
        break;
    }
  }
  is_maximal_[a] = maximal ? 1 : 0;
  if (maximal) ++maximal_count_;
  ++t_;
}

std::vector<std::size_t> PrefixState::maximal_arrivals() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < t_; ++i) {
    if (is_maximal(i)) out.push_back(i);
  }
  return out;
}

std::string pack_state_key(std::size_t t, std::span<const std::uint8_t> pair_codes) {
  if (t > 0xffff) throw SizeError("prefix too long to serialize");
  std::string key;
  key.reserve(2 + (pair_codes.size() + 3) / 4);
  key.push_back(static_cast<char>(t >> 8));
  key.push_back(static_cast<char>(t & 0xff));
  std::uint8_t byte = 0;
  std::size_t filled = 0;
  for (std::uint8_t code : pair_codes) {
    byte = static_cast<std::uint8_t>(byte | (code << (6 - 2 * filled)));
    if (++filled == 4) {
      key.push_back(static_cast<char>(byte));
      byte = 0;
      filled = 0;
    }
  }
  if (filled > 0) key.push_back(static_cast<char>(byte));
  return key;
}

std::string PrefixState::key() const {
  std::vector<std::uint8_t> codes;
  codes.reserve(t_ * (t_ > 0 ? t_ - 1 : 0) / 2);
  for (std::size_t i = 1; i < t_; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      PairRelation r = PairRelation::incomparable;
      if (precedes(i, j)) r = PairRelation::below;
      else if (precedes(j, i)) r = PairRelation::above;
      codes.push_back(static_cast<std::uint8_t>(r));
    }
  }
  return pack_state_key(t_, codes);
}

std::string to_hex(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 15]);
  }
  return out;
}

std::string PrefixState::key_hex() const { return to_hex(key()); }

PrefixState PrefixState::from_key(std::string_view key) {
  if (key.size() < 2) throw ParseError("state key too short");
  const std::size_t t = (static_cast<std::size_t>(static_cast<unsigned char>(key[0])) << 8) |
                        static_cast<unsigned char>(key[1]);
  const std::size_t pairs = t * (t > 0 ? t - 1 : 0) / 2;
  if (key.size() != 2 + (pairs + 3) / 4) throw ParseError("state key length does not match t");
  std::size_t index = 0;
  auto code_at = [&](std::size_t k) {
    const auto byte = static_cast<unsigned char>(key[2 + k / 4]);
    return static_cast<std::uint8_t>((byte >> (6 - 2 * (k % 4))) & 3U);
  };
  PrefixState state(t);
  std::vector<PairRelation> rel;
  for (std::size_t i = 0; i < t; ++i) {
    rel.clear();
    for (std::size_t j = 0; j < i; ++j) {
      const std::uint8_t c = code_at(index++);
      if (c > 2) throw ParseError("invalid relation code in state key");
      rel.push_back(static_cast<PairRelation>(c));
    }
    state.extend(rel);
  }
  for (std::size_t k = pairs; k < (key.size() - 2) * 4; ++k) {
    if (code_at(k) != 0) throw ParseError("nonzero padding in state key");
  }
  if (!is_strict_partial_order(t, state.matrix())) {
    throw ParseError("state key does not describe a strict partial order");
  }
  return state;
}

std::vector<std::uint8_t> PrefixState::matrix() const {
  std::vector<std::uint8_t> m(t_ * t_, 0);
  for (std::size_t i = 0; i < t_; ++i) {
    for (std::size_t j = 0; j < t_; ++j) m[i * t_ + j] = precedes(i, j) ? 1 : 0;
  }
  return m;
}

bool operator==(const PrefixState& a, const PrefixState& b) {
  return a.size() == b.size() && a.matrix() == b.matrix();
}

void observe_arrival(const Poset& poset, std::span<const ElementId> earlier, ElementId next,
                     PrefixState& state) {
  thread_local std::vector<PairRelation> rel;
  rel.resize(earlier.size());
  for (std::size_t j = 0; j < earlier.size(); ++j) {
    const ElementId e = earlier[j];
    if (poset.precedes(next, e)) rel[j] = PairRelation::below;
    else if (poset.precedes(e, next)) rel[j] = PairRelation::above;
    else rel[j] = PairRelation::incomparable;
  }
  state.extend(rel);
}

bool is_permutation_of_ids(std::span<const ElementId> order, std::size_t n) {
  if (order.size() != n) return false;
  std::vector<std::uint8_t> seen(n, 0);
  for (ElementId x : order) {
    if (x >= n || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

PrefixState induced_prefix(const Poset& poset, std::span<const ElementId> order, std::size_t t) {
  if (!is_permutation_of_ids(order, poset.size())) {
    throw ParamError("arrival order is not a permutation of the poset's elements");
  }
  if (t < 1 || t > poset.size()) throw ParamError("prefix length out of range");
  PrefixState state(t);
  for (std::size_t i = 0; i < t; ++i) {
    observe_arrival(poset, order.first(i), order[i], state);
  }
  return state;
}

}  // namespace psec
