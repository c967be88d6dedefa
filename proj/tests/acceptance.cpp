// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "psec/bounds.hpp"
#include "psec/exact.hpp"
#include "psec/generators.hpp"
#include "psec/montecarlo.hpp"
#include "psec/poset.hpp"
#include "psec/strategies.hpp"

using namespace psec;

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double classical_optimum(std::size_t n) {
  double best = 1.0 / static_cast<double>(n);
  for (std::size_t r = 2; r <= n; ++r) {
    double sum = 0.0;
    for (std::size_t t = r; t <= n; ++t) sum += 1.0 / static_cast<double>(t - 1);
    best = std::max(best, static_cast<double>(r - 1) / static_cast<double>(n) * sum);
  }
  return best;
}

std::vector<Poset> all_posets_up_to(std::size_t max_n, Outcome& o) {
  static constexpr std::size_t kClasses[] = {1, 1, 2, 5, 16, 63, 318};
  std::vector<Poset> out;
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto level = enumerate_all_posets(n);
    o.require(level.size() == kClasses[n], "wrong class count at n=" + std::to_string(n));
    for (auto& p : level) out.push_back(std::move(p));
  }
  return out;
}

Outcome c1_p_star() {
  Outcome o;
  o.require(std::abs(p_star(1) - 0.367879441171) < 1e-9, "k=1");
  o.require(std::abs(p_star(2) - 0.5) < 1e-9, "k=2");
  o.require(std::abs(p_star(3) - 0.577350269190) < 1e-9, "k=3");
  for (std::size_t k = 2; k <= 3; ++k) {
    const double formula = std::pow(1.0 / static_cast<double>(k), 1.0 / static_cast<double>(k - 1));
    o.require(std::abs(p_star(k) - formula) < 1e-9, "formula mismatch");
  }
  o.detail = fmt("p_1=%.12f p_2=%.12f p_3=%.12f", p_star(1), p_star(2), p_star(3));
  return o;
}

Outcome c2_nb_identity() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t k = 1; k <= 5; ++k) {
    for (double p : {0.3, 0.5, 0.7, 0.9}) {
      const double err = std::abs(nb_identity_sum(k, p) - std::pow(p, -static_cast<double>(k)));
      worst = std::max(worst, err);
    }
  }
  o.require(worst < 1e-9, "");
  o.detail = fmt("max error %.3g", worst);
  return o;
}

Outcome c3_classical() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t n = 3; n <= 9; ++n) {
    worst = std::max(worst, std::abs(optimal_value(linear_order(n)).result.value - classical_optimum(n)));
  }
  o.require(std::abs(optimal_value(linear_order(3)).result.value - 0.5) < 1e-9, "n=3");
  o.require(std::abs(optimal_value(linear_order(4)).result.value - 11.0 / 24.0) < 1e-9, "n=4");
  o.require(std::abs(optimal_value(linear_order(5)).result.value - 13.0 / 30.0) < 1e-9, "n=5");
  o.require(worst < 1e-9, "");
  if (o.ok) o.detail = fmt("n=3..9 max deviation %.3g", worst);
  return o;
}

Outcome c4_known_max() {
  Outcome o;
  const auto posets = all_posets_up_to(5, o);
  double min_value = 1.0;
  for (const Poset& p : posets) {
    const std::size_t k = p.maximal_count();
    const double v = exact_success_tau(p, k, std::exp(-1.0 / static_cast<double>(k))).value;
    min_value = std::min(min_value, v);
  }
  o.require(min_value > kInvE, "");
  if (o.ok) o.detail = fmt("%.0f posets, min value %.9f > 1/e", static_cast<double>(posets.size()), min_value);
  return o;
}

Outcome c5_width_k() {
  Outcome o;
  const auto posets = all_posets_up_to(5, o);
  double min_margin = 1.0;
  std::size_t checked = 0;
  for (const Poset& p : posets) {
    const std::size_t k = p.maximal_count();
    if (width_and_chain_cover(p).width != k) continue;
    ++checked;
    min_margin = std::min(min_margin, exact_success_tau(p, k, p_star(k)).value - p_star(k));
  }
  o.require(min_margin > 0.0, "");
  if (o.ok) o.detail = fmt("%.0f posets, min margin %.9f", static_cast<double>(checked), min_margin);
  return o;
}

Outcome c6_mc_exact() {
  Outcome o;
  const Poset d = disjoint_chains(2, 2);
  const double exact = exact_success_tau(d, 2, 0.5).value;
  const auto rule = make_tau_k(4, 2, 0.5);
  std::vector<std::string> csv;
  SuccessReport first;
  for (unsigned threads : {1U, 4U, 0U, 4U}) {
    const SuccessReport r = estimate_success(d, *rule, 1'000'000, 20240601, threads, "D_2(2)");
    std::ostringstream out;
    write_reports_csv(out, {r});
    csv.push_back(out.str());
    first = r;
  }
  for (const auto& s : csv) o.require(s == csv.front(), "reports differ across runs");
  const double dev = std::abs(first.estimate - exact) / first.standard_error;
  o.require(dev <= 4.0, "");
  if (o.ok) o.detail = fmt("estimate %.6f exact %.6f, %.2f SE", first.estimate, exact, dev);
  return o;
}

Outcome c7_chains_at_scale() {
  Outcome o;
  const SuccessReport a =
      estimate_success(disjoint_chains(1, 100), *make_tau_k(100, 1, kInvE), 200'000, 71, 0, "D_1(100)");
  const SuccessReport b =
      estimate_success(disjoint_chains(3, 50), *make_tau_k(150, 3, p_star(3)), 200'000, 73, 0, "D_3(50)");
  o.require(a.estimate >= kInvE - 3.0 * a.standard_error, "D_1(100)");
  o.require(b.estimate >= p_star(3) - 3.0 * b.standard_error, "D_3(50)");
  if (o.ok) o.detail = fmt("D_1(100) %.5f, D_3(50) %.5f", a.estimate, b.estimate);
  return o;
}

Outcome c8_trend() {
  Outcome o;
  double prev = 2.0;
  for (std::size_t x = 1; x <= 8; ++x) {
    const double v = optimal_value(disjoint_chains(1, x)).result.value;
    o.require(v <= prev + 1e-12, "D_1(x) increased at x=" + std::to_string(x));
    o.require(v >= kInvE, "D_1(x) below 1/e at x=" + std::to_string(x));
    prev = v;
  }
  const YGameSolution big = y_game_solve(YGameSpec{1, 500, 100});
  o.require(big.value <= p_star(1) + 0.02, "y-game value");
  o.require(std::abs(static_cast<double>(big.u_star) / 100.0 - kInvE) < 0.05, "y-game u*/m");
  std::size_t specs = 0;
  for (std::size_t k : {1U, 2U, 3U, 4U}) {
    for (std::size_t ell : {1U, 5U, 20U, 60U, 200U}) {
      const YGameSolution s = y_game_solve(YGameSpec{k, ell, 10 + 7 * k});
      o.require(s.last_rejected % (k * ell) == 0, "I not a multiple of k*ell");
      ++specs;
    }
  }
  if (o.ok) {
    o.detail = fmt("D_1(8) %.6f; y-game value %.6f u*/m %.2f", prev, big.value,
                   static_cast<double>(big.u_star) / 100.0);
    o.detail += "; " + std::to_string(specs) + " specs";
  }
  return o;
}

Outcome c9_z_closed_form() {
  Outcome o;
  std::size_t states = 0;
  for (std::size_t k = 1; k <= 8; ++k) {
    for (std::size_t x = 1; k * x <= 8; ++x) {
      for (const auto& [key, z] : state_z_values(disjoint_chains(k, x))) {
        ++states;
        const PrefixState s = PrefixState::from_key(key);
        const std::size_t cur = s.size() - 1;
        double expected = 0.0;
        if (s.current_is_maximal()) {
          std::size_t y = 1;
          for (std::size_t j = 0; j < cur; ++j) y += s.precedes(j, cur) ? 1 : 0;
          expected = static_cast<double>(y) / static_cast<double>(x);
        }
        o.require(std::abs(z - expected) < 1e-12, "state " + key);
      }
    }
  }
  if (o.ok) o.detail = std::to_string(states) + " states";
  return o;
}

Outcome c10_dominance() {
  Outcome o;
  const auto posets = all_posets_up_to(5, o);
  double min_gap = 1.0;
  for (const Poset& p : posets) {
    const double opt = optimal_value(p).result.value;
    for (std::size_t k = 1; k <= p.size(); ++k) {
      for (double prob : {0.2, p_star(k), std::exp(-1.0 / static_cast<double>(k)), 0.8}) {
        min_gap = std::min(min_gap, opt - exact_success_tau(p, k, prob).value);
      }
    }
  }
  o.require(min_gap >= -1e-9, "");
  if (o.ok) o.detail = fmt("min gap %.3g", min_gap);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 p_star values", c1_p_star},
      {"2 negative binomial identity", c2_nb_identity},
      {"3 classical secretary optimum on chains", c3_classical},
      {"4 known-max bound 1/e on all posets n<=5", c4_known_max},
      {"5 width-k bound p_k on all posets n<=5", c5_width_k},
      {"6 Monte Carlo vs exact on D_2(2), reproducible", c6_mc_exact},
      {"7 chain lower bounds at scale", c7_chains_at_scale},
      {"8 disjoint-chain trend and Y-game", c8_trend},
      {"9 Z_t closed form on D_k(x)", c9_z_closed_form},
      {"10 optimal dominates tau_k", c10_dominance},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s: %s [%.2fs]\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
