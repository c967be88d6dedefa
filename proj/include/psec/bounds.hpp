#pragma once

#include <cstddef>
#include <vector>

namespace psec {

/// p_k: 1/e for k = 1, (1/k)^(1/(k-1)) otherwise.
double p_star(std::size_t k);

/// Lower bound for tau_k(p) on k disjoint chains:
/// p log(1/p) for k = 1, k/(k-1) p (1 - p^(k-1)) for k > 1.
double chain_lower_bound(std::size_t k, double p);

/// k p^k log(1/p): lower bound for tau_k(p) on any poset with k maximal elements.
double known_max_lower_bound(std::size_t k, double p);
/// (p / (1-p)) log(1/p): success probability of tau_k(p) conditioned on the
/// warm-up set containing exactly k-1 of the maximal elements.
double known_max_conditional_bound(double p);
/// k p^(k-1) (1-p): probability of that conditioning event.
double known_max_event_probability(std::size_t k, double p);

/// sum_{s=0}^{s_max} C(k+s-1, k-1) (1-p)^s, which tends to p^(-k).
double nb_identity_partial_sum(std::size_t k, double p, std::size_t s_max);
/// Same series summed until terms are past their peak and below 1e-15.
double nb_identity_sum(std::size_t k, double p);

struct VSeries {
  double closed_form = 0.0;
  double truncated_series = 0.0;
  std::size_t terms = 0;
};

/// V_k(p) = sum_{s>=1} (1/s) (1-p)^s C(k+s-2, k-1), in closed form and by
/// direct summation (terms below 1e-15 past the peak, at most 10^6 terms).
VSeries v_series(std::size_t k, double p);

/// Auxiliary game of independent payoffs on D_k(ell*m): at time t the payoff
/// is y_t = (s(t)+1)/m with probability p~_t and 0 otherwise, where
/// s(t) = ceil(t / (k ell)) and p~_t = 1/(ell (s(t)-2)) for s(t) >= 3, else 1.
struct YGameSpec {
  std::size_t k = 1;
  std::size_t ell = 1;
  std::size_t m = 3;

  std::size_t n() const noexcept { return k * ell * m; }
  std::size_t segment(std::size_t t) const noexcept { return (t + k * ell - 1) / (k * ell); }
  double payoff(std::size_t t) const noexcept;
  double payoff_probability(std::size_t t) const noexcept;
};

struct YGameSolution {
  /// v[t] for t = 1..n; v[0] and v[n+1] are unused (v[n+1] = 0).
  std::vector<double> v;
  /// Last t with y_t < v(t+1), 0 if none: the optimal rule skips 1..I.
  std::size_t last_rejected = 0;
  std::size_t u_star = 0;
  double value = 0.0;
};

/// Backward recursion for the Y-game. Throws SpecError unless k, ell >= 1 and m >= 3.
YGameSolution y_game_solve(const YGameSpec& spec);

/// E(Y_tau_u) for the rule that accepts the first nonzero payoff after
/// k ell u, computed as sum_t prod_{j<t}(1 - p~_j) p~_t y_t. u in [0, m-1].
double y_game_threshold_value(const YGameSpec& spec, std::size_t u);

}  // namespace psec
