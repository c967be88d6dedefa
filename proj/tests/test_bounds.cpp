#include <doctest.h>

#include <cmath>
#include <numbers>

#include "psec/bounds.hpp"
#include "psec/errors.hpp"

using namespace psec;

namespace {

// Segment-level form of E(Y_tau_u) for u >= 2, where every later segment has
// p~ = 1/(ell (s-2)).
double segment_sum_oracle(const YGameSpec& g, std::size_t u_star) {
  const double kl = static_cast<double>(g.k * g.ell);
  const double ell = static_cast<double>(g.ell);
  double total = 0.0;
  for (std::size_t u = u_star; u < g.m; ++u) {
    double survive = 1.0;
    for (std::size_t q = u_star + 1; q <= u; ++q) {
      survive *= std::pow(1.0 - 1.0 / (ell * static_cast<double>(q - 2)), kl);
    }
    const double hit = 1.0 - std::pow(1.0 - 1.0 / (ell * static_cast<double>(u - 1)), kl);
    total += survive * hit * static_cast<double>(u + 2) / static_cast<double>(g.m);
  }
  return total;
}

}  // namespace

TEST_CASE("p_star") {
  CHECK(p_star(1) == doctest::Approx(0.36787944117).epsilon(1e-10));
  CHECK(p_star(2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p_star(3) == doctest::Approx(0.57735026919).epsilon(1e-10));
  CHECK(p_star(3) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(p_star(0), ParamError);
}

TEST_CASE("chain lower bound") {
  CHECK(chain_lower_bound(1, 1.0 / std::numbers::e) == doctest::Approx(1.0 / std::numbers::e).epsilon(1e-12));
  CHECK(chain_lower_bound(2, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(chain_lower_bound(1, 1.0 - 1e-12) < 1e-11);
  CHECK_THROWS_AS(chain_lower_bound(1, 0.0), ParamError);
  CHECK_THROWS_AS(chain_lower_bound(2, 1.0), ParamError);
}

TEST_CASE("chain lower bound is maximized at p_k on a fine grid") {
  constexpr int kGrid = 10'000;
  for (std::size_t k = 1; k <= 8; ++k) {
    double best = -1.0;
    double argmax = 0.0;
    for (int i = 1; i < kGrid; ++i) {
      const double p = static_cast<double>(i) / kGrid;
      const double v = chain_lower_bound(k, p);
      if (v > best) {
        best = v;
        argmax = p;
      }
    }
    CHECK(std::abs(argmax - p_star(k)) <= 1.0 / kGrid);
  }
}

TEST_CASE("known-max bound and its factorization") {
  CHECK(known_max_lower_bound(1, 1.0 / std::numbers::e) == doctest::Approx(1.0 / std::numbers::e).epsilon(1e-12));
  for (std::size_t k = 1; k <= 10; ++k) {
    const double p = std::exp(-1.0 / static_cast<double>(k));
    CHECK(std::abs(known_max_lower_bound(k, p) - 1.0 / std::numbers::e) < 1e-12);
  }
  for (std::size_t k = 1; k <= 6; ++k) {
    for (double p : {0.05, 0.3, 0.5, 0.77, 0.99}) {
      CHECK(std::abs(known_max_conditional_bound(p) * known_max_event_probability(k, p) -
                     known_max_lower_bound(k, p)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(known_max_lower_bound(2, 1.5), ParamError);
  CHECK_THROWS_AS(known_max_conditional_bound(0.0), ParamError);
}

TEST_CASE("negative binomial series") {
  CHECK(nb_identity_partial_sum(1, 0.99, 0) == 1.0);
  CHECK(nb_identity_partial_sum(1, 0.5, 200) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(nb_identity_partial_sum(2, 0.5, 60) - 4.0) < 1e-9);
  CHECK(std::abs(nb_identity_sum(1, 0.5) - 2.0) < 1e-12);
  for (std::size_t k = 1; k <= 6; ++k) {
    for (double p : {0.2, 0.5, 0.8}) {
      const double target = std::pow(p, -static_cast<double>(k));
      const auto start = static_cast<std::size_t>(std::ceil(static_cast<double>(k) / p));
      double prev = std::abs(nb_identity_partial_sum(k, p, start) - target);
      for (std::size_t s = start + 1; s < start + 40; ++s) {
        const double err = std::abs(nb_identity_partial_sum(k, p, s) - target);
        // Monotone until the error reaches double rounding of the target.
        CHECK((err <= prev || err < 1e-14 * target));
        prev = err;
      }
    }
  }
  CHECK_THROWS_AS(nb_identity_partial_sum(0, 0.5, 3), ParamError);
}

TEST_CASE("V_k(p) closed form and series") {
  const VSeries v1 = v_series(1, 0.5);
  CHECK(v1.closed_form == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(std::abs(v1.truncated_series - std::log(2.0)) < 1e-12);
  const VSeries v2 = v_series(2, 0.5);
  CHECK(v2.closed_form == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(v2.truncated_series - 1.0) < 1e-12);
  for (std::size_t k = 1; k <= 6; ++k) {
    for (double p : {0.2, 0.4, 0.6, 0.9}) {
      const VSeries v = v_series(k, p);
      CHECK(std::abs(v.truncated_series - v.closed_form) < 1e-12 * std::max(1.0, v.closed_form));
      const double lhs = static_cast<double>(k) * std::pow(p, static_cast<double>(k)) * v.closed_form;
      CHECK(std::abs(lhs - chain_lower_bound(k, p)) < 1e-12);
    }
  }
}

TEST_CASE("Y-game: terminal value and small instance") {
  const YGameSpec g{1, 10, 3};
  const YGameSolution sol = y_game_solve(g);
  CHECK(sol.v[30] == doctest::Approx(2.0 / 15.0).epsilon(1e-15));
  CHECK(sol.value == sol.v[1]);
  CHECK_THROWS_AS(y_game_solve(YGameSpec{1, 10, 2}), SpecError);
  CHECK_THROWS_AS(y_game_solve(YGameSpec{0, 10, 5}), SpecError);
  CHECK_THROWS_AS(y_game_threshold_value(g, 3), SpecError);
}

TEST_CASE("Y-game: large instance approaches p_1") {
  const YGameSpec g{1, 500, 100};
  const YGameSolution sol = y_game_solve(g);
  CHECK(sol.value > p_star(1));
  CHECK(sol.value < p_star(1) + 0.02);
  CHECK(std::abs(static_cast<double>(sol.u_star) / 100.0 - 1.0 / std::numbers::e) < 0.05);
}

TEST_CASE("Y-game structure across a grid of specs") {
  for (std::size_t k : {1U, 2U, 3U}) {
    for (std::size_t ell : {1U, 4U, 25U}) {
      for (std::size_t m : {3U, 5U, 12U, 40U}) {
        const YGameSpec g{k, ell, m};
        const YGameSolution sol = y_game_solve(g);
        CHECK(sol.last_rejected % (k * ell) == 0);
        CHECK(sol.u_star < m);
        for (std::size_t t = 1; t < g.n(); ++t) CHECK(sol.v[t] >= sol.v[t + 1]);
        // The optimal skip set is exactly {t : y_t < v(t+1)}.
        for (std::size_t t = 1; t < g.n(); ++t) {
          CHECK((g.payoff(t) < sol.v[t + 1]) == (t <= sol.last_rejected));
        }
        CHECK(std::abs(y_game_threshold_value(g, sol.u_star) - sol.value) < 1e-9);
        for (std::size_t u = 0; u < m; ++u) {
          const double direct = y_game_threshold_value(g, u);
          CHECK(direct <= sol.value + 1e-9);
          if (u >= 2) CHECK(std::abs(direct - segment_sum_oracle(g, u)) < 1e-12);
        }
      }
    }
  }
}
