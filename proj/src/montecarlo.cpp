#include "psec/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <thread>

#include "psec/errors.hpp"
#include "psec/random.hpp"

namespace psec {

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0, 0.5};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double se = std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - z * se), std::min(1.0, center + z * se), se};
}

bool run_trial(const Poset& poset, const StoppingRule& rule, std::uint64_t trial_seed) {
  const std::size_t n = poset.size();
  if (n == 0) return false;
  std::vector<ElementId> order(n);
  std::iota(order.begin(), order.end(), ElementId{0});
  RandomnessStream shuffle_stream(split_seed(trial_seed, 0));
  shuffle_stream.shuffle(std::span<ElementId>(order));
  RandomnessStream rule_stream(split_seed(trial_seed, 1));
  const auto active = rule.activate(n, rule_stream);

  PrefixState state(n);
  for (std::size_t t = 0; t < n; ++t) {
    observe_arrival(poset, std::span<const ElementId>(order).first(t), order[t], state);
    if (decide(*active, state, t + 1, n) == Decision::stop) return poset.is_maximal(order[t]);
  }
  return poset.is_maximal(order[n - 1]);  // unreachable: decide() stops at t = n
}

SuccessReport estimate_success(const Poset& poset, const StoppingRule& rule, std::uint64_t trials,
                               std::uint64_t master_seed, unsigned threads,
                               std::string poset_name) {
  if (trials < 1) throw ParamError("trials must be at least 1");
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

  std::vector<std::uint64_t> partial(threads, 0);
  auto work = [&](unsigned worker) {
    std::uint64_t wins = 0;
    for (std::uint64_t i = worker; i < trials; i += threads) {
      if (run_trial(poset, rule, split_seed(master_seed, i))) ++wins;
    }
    partial[worker] = wins;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  SuccessReport report;
  report.poset = std::move(poset_name);
  report.n = poset.size();
  report.k_max = poset.maximal_count();
  report.width = width_and_chain_cover(poset).width;
  report.rule = rule.descriptor().to_string();
  report.trials = trials;
  report.successes = std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
  report.estimate = static_cast<double>(report.successes) / static_cast<double>(trials);
  const WilsonInterval ci = wilson_interval(report.successes, trials);
  report.ci_low = std::min(ci.low, report.estimate);
  report.ci_high = std::max(ci.high, report.estimate);
  report.standard_error = ci.standard_error;
  report.seed = master_seed;
  return report;
}

RulePtr RuleSpec::instantiate(std::size_t n) const {
  switch (kind) {
    case Kind::tau_k: return make_tau_k(n, k, p);
    case Kind::threshold: return make_classical_threshold(n, r);
  }
  throw ParamError("unknown rule kind");
}

std::vector<SuccessReport> sweep(const std::vector<FamilySpec>& posets,
                                 const std::vector<RuleSpec>& rules, std::uint64_t trials,
                                 std::uint64_t master_seed, unsigned threads) {
  if (posets.empty()) throw ParamError("sweep needs at least one poset");
  if (rules.empty()) throw ParamError("sweep needs at least one rule");
  std::vector<SuccessReport> out;
  out.reserve(posets.size() * rules.size());
  for (std::size_t i = 0; i < posets.size(); ++i) {
    const Poset poset = make_family(posets[i]);
    for (std::size_t j = 0; j < rules.size(); ++j) {
      const RulePtr rule = rules[j].instantiate(poset.size());
      const std::uint64_t cell_seed = split_seed(master_seed, i * rules.size() + j);
      out.push_back(estimate_success(poset, *rule, trials, cell_seed, threads, posets[i].describe()));
    }
  }
  return out;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_reports_csv(std::ostream& out, const std::vector<SuccessReport>& reports) {
  out << "poset,n,k_max,width,rule,trials,successes,estimate,ci_low,ci_high,seed\n";
  for (const auto& r : reports) {
    out << csv_field(r.poset) << ',' << r.n << ',' << r.k_max << ',' << r.width << ','
        << csv_field(r.rule) << ',' << r.trials << ',' << r.successes << ','
        << format_number(r.estimate) << ',' << format_number(r.ci_low) << ','
        << format_number(r.ci_high) << ',' << r.seed << '\n';
  }
}

nlohmann::json reports_json(const std::vector<SuccessReport>& reports) {
  // Numbers go through format_number so JSON and CSV carry identical values.
  auto num = [](double v) { return nlohmann::json::parse(format_number(v)); };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports) {
    rows.push_back({{"poset", r.poset},
                    {"n", r.n},
                    {"k_max", r.k_max},
                    {"width", r.width},
                    {"rule", r.rule},
                    {"trials", r.trials},
                    {"successes", r.successes},
                    {"estimate", num(r.estimate)},
                    {"ci_low", num(r.ci_low)},
                    {"ci_high", num(r.ci_high)},
                    {"seed", r.seed}});
  }
  return rows;
}

}  // namespace psec
