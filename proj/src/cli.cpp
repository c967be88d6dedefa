#include "psec/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "psec/bounds.hpp"
#include "psec/errors.hpp"
#include "psec/exact.hpp"
#include "psec/generators.hpp"
#include "psec/montecarlo.hpp"
#include "psec/poset.hpp"
#include "psec/strategies.hpp"

namespace psec::cli {

namespace {

using Cell = std::variant<std::string, std::int64_t, std::uint64_t, double, bool>;

/// Output table shared by every subcommand: CSV with `#` header lines, or a
/// JSON object {"header": {...}, "rows": [...]}.
struct Table {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return std::to_string(v);
      },
      c);
}

nlohmann::json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return nlohmann::json::parse(format_number(v));
        else return v;
      },
      c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_table(std::ostream& out, const Table& table, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json header = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.header) header[k] = v;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < table.columns.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
      rows.push_back(std::move(obj));
    }
    nlohmann::ordered_json doc;
    doc["header"] = std::move(header);
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : table.header) out << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(row[i]));
    out << '\n';
  }
}

/// Every option of the chosen subcommand with its effective value.
std::vector<std::pair<std::string, std::string>> flag_header(const CLI::App& sub) {
  std::vector<std::pair<std::string, std::string>> header{{"command", sub.get_name()}};
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_name() == "--help") continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) value += (i ? " " : "") + results[i];
      if (results.empty()) value = "true";
    } else {
      value = opt->get_default_str();
      if (value.empty() && opt->get_items_expected_max() == 0) value = "false";
    }
    std::string name = opt->get_name();
    name.erase(0, name.find_first_not_of('-'));
    header.emplace_back(name, value);
  }
  return header;
}

/// Parses `--p`: a number, `auto` (p_k) or `auto-universal` (e^{-1/k}).
double resolve_p(const std::string& text, std::size_t k) {
  if (text == "auto") return p_star(k);
  if (text == "auto-universal") return std::exp(-1.0 / static_cast<double>(k));
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw ParamError("--p must be a number, auto or auto-universal");
  return p;
}

std::vector<double> parse_grid(const std::string& text) {
  // start:stop:step, inclusive of stop up to rounding.
  std::vector<double> parts;
  std::stringstream ss(text);
  for (std::string piece; std::getline(ss, piece, ':');) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != piece.size()) throw ParamError("grid must look like start:stop:step");
    parts.push_back(v);
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw ParamError("grid must look like start:stop:step with step > 0 and stop >= start");
  }
  const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
  std::vector<double> grid;
  for (std::size_t i = 0; i < count; ++i) grid.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return grid;
}

struct Output {
  std::string path;
  std::string format = "csv";
};

void add_output_flags(CLI::App* sub, Output& o) {
  sub->add_option("--out", o.path, "Output path (default stdout)");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void emit(const Output& o, std::ostream& out, const Table& table) {
  if (o.path.empty()) {
    write_table(out, table, o.format);
    return;
  }
  std::ofstream file(o.path);
  if (!file) throw ParamError("cannot open output file " + o.path);
  write_table(file, table, o.format);
}

struct RuleFlags {
  std::string rule = "tau_k";
  std::optional<std::size_t> k;
  std::string p = "auto";
  std::size_t r = 1;
};

void add_rule_flags(CLI::App* sub, RuleFlags& f) {
  sub->add_option("--rule", f.rule, "tau_k or threshold")->check(CLI::IsMember({"tau_k", "threshold"}));
  sub->add_option("--k", f.k, "tau_k parameter (default: number of maximal elements)");
  sub->add_option("--p", f.p, "tau_k probability: number, auto (p_k) or auto-universal (e^{-1/k})");
  sub->add_option("--r", f.r, "threshold position");
}

RulePtr build_rule(const RuleFlags& f, const Poset& poset) {
  if (f.rule == "threshold") return make_classical_threshold(poset.size(), f.r);
  const std::size_t k = f.k.value_or(poset.maximal_count());
  return make_tau_k(poset.size(), k, resolve_p(f.p, k));
}

// --- theorem checks -------------------------------------------------------

struct CheckRow {
  std::size_t n;
  std::size_t index;
  std::size_t k_max;
  std::size_t width;
  std::string claim;
  double p;
  double value;
  double bound;
  bool ok;
};

std::vector<CheckRow> theorem_checks(std::size_t max_n) {
  std::vector<CheckRow> rows;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const auto posets = enumerate_all_posets(n);
    for (std::size_t i = 0; i < posets.size(); ++i) {
      const Poset& poset = posets[i];
      const std::size_t k = poset.maximal_count();
      const std::size_t width = width_and_chain_cover(poset).width;
      const double universal_p = std::exp(-1.0 / static_cast<double>(k));
      const double universal = exact_success_tau(poset, k, universal_p).value;
      const double inv_e = 1.0 / std::numbers::e;
      rows.push_back({n, i, k, width, "known_max_universal", universal_p, universal, inv_e,
                      universal > inv_e});
      if (width == k) {
        const double pk = p_star(k);
        const double v = exact_success_tau(poset, k, pk).value;
        rows.push_back({n, i, k, width, "width_k", pk, v, pk, v > pk});
      }
    }
  }
  return rows;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secretary problem on partially ordered sets", "psec"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  // generate
  auto* gen = app.add_subcommand("generate", "Build a poset family and write it in text format");
  std::string family;
  std::size_t g_k = 1, g_x = 1, g_n = 1, g_depth = 1, g_levels = 1;
  double g_density = 0.5;
  std::uint64_t g_seed = 0;
  std::string g_out;
  gen->add_option("--family", family, "disjoint_chains, linear, antichain, binary_tree, twins, random")
      ->required();
  gen->add_option("--k", g_k, "chain count");
  gen->add_option("--x", g_x, "chain length");
  gen->add_option("--n", g_n, "element count");
  gen->add_option("--depth", g_depth, "binary tree depth");
  gen->add_option("--levels", g_levels, "twin levels");
  gen->add_option("--density", g_density, "random relation density");
  gen->add_option("--seed", g_seed, "random poset seed");
  gen->add_option("--out", g_out, "Output path (default stdout)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo success estimate of a stopping rule");
  std::string s_poset;
  RuleFlags s_rule;
  std::uint64_t s_trials = 100000;
  std::uint64_t s_seed = 42;
  unsigned s_threads = 0;
  Output s_out;
  sim->add_option("--poset", s_poset, "Poset file")->required();
  add_rule_flags(sim, s_rule);
  sim->add_option("--trials", s_trials, "Trial count");
  sim->add_option("--seed", s_seed, "Master seed");
  sim->add_option("--threads", s_threads, "Worker threads (0 = hardware); does not change results");
  add_output_flags(sim, s_out);

  // exact
  auto* ex = app.add_subcommand("exact", "Exact success probability of a stopping rule");
  std::string e_poset;
  RuleFlags e_rule;
  Output e_out;
  ex->add_option("--poset", e_poset, "Poset file")->required();
  add_rule_flags(ex, e_rule);
  add_output_flags(ex, e_out);

  // optimal
  auto* opt = app.add_subcommand("optimal", "Optimal success probability by backward induction");
  std::string o_poset;
  std::string o_table;
  Output o_out;
  opt->add_option("--poset", o_poset, "Poset file")->required();
  opt->add_option("--table", o_table, "Write the optimal-rule table as JSON");
  add_output_flags(opt, o_out);

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Closed-form bounds and series");
  std::size_t b_k = 1;
  std::optional<double> b_p;
  std::string b_grid;
  Output b_out;
  bnd->add_option("--k", b_k, "k")->check(CLI::PositiveNumber);
  auto* p_opt = bnd->add_option("--p", b_p, "Single p in (0, 1)");
  bnd->add_option("--p-grid", b_grid, "start:stop:step")->excludes(p_opt);
  add_output_flags(bnd, b_out);

  // ygame
  auto* yg = app.add_subcommand("ygame", "Solve the auxiliary Y-game");
  YGameSpec y_spec;
  bool y_thresholds = false;
  Output y_out;
  yg->add_option("--k", y_spec.k, "chain count");
  yg->add_option("--ell", y_spec.ell, "segment length");
  yg->add_option("--m", y_spec.m, "segment count");
  yg->add_flag("--thresholds", y_thresholds, "Also list E(Y) for every segment threshold u");
  add_output_flags(yg, y_out);

  // verify-theorems
  auto* ver = app.add_subcommand("verify-theorems", "Exhaustive lower-bound checks on small posets");
  std::size_t v_max_n = 5;
  Output v_out;
  ver->add_option("--max-n", v_max_n, "Largest poset size (<= 6)")->check(CLI::Range(1, 6));
  add_output_flags(ver, v_out);

  // conjecture-scan
  auto* con = app.add_subcommand("conjecture-scan", "Minimum of P(success of tau_k(p_k)) - p_k over small posets");
  std::size_t c_max_n = 6;
  Output c_out;
  con->add_option("--max-n", c_max_n, "Largest poset size (<= 6)")->check(CLI::Range(1, 6));
  add_output_flags(con, c_out);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "psec: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      FamilySpec spec;
      spec.kind = parse_family(family);
      spec.k = g_k;
      spec.x = g_x;
      spec.n = g_n;
      spec.depth = g_depth;
      spec.levels = g_levels;
      spec.density = g_density;
      spec.seed = g_seed;
      const Poset poset = make_family(spec);
      std::string comment = "psec generate";
      for (const auto& [k, v] : flag_header(*gen)) {
        if (k != "command") comment += " --" + k + " " + v;
      }
      if (g_out.empty()) {
        out << "# " << spec.describe() << '\n';
        write_poset(out, poset, comment);
      } else {
        std::ofstream file(g_out);
        if (!file) throw ParamError("cannot open output file " + g_out);
        file << "# " << spec.describe() << '\n';
        write_poset(file, poset, comment);
      }
      return kExitOk;
    }

    if (sim->parsed()) {
      const Poset poset = read_poset_file(s_poset);
      const RulePtr rule = build_rule(s_rule, poset);
      const SuccessReport r = estimate_success(poset, *rule, s_trials, s_seed, s_threads, s_poset);
      Table t{flag_header(*sim),
              {"poset", "n", "k_max", "width", "rule", "trials", "successes", "estimate", "ci_low",
               "ci_high", "seed"},
              {}};
      t.rows.push_back({r.poset, std::uint64_t{r.n}, std::uint64_t{r.k_max}, std::uint64_t{r.width},
                        r.rule, r.trials, r.successes, r.estimate, r.ci_low, r.ci_high, r.seed});
      emit(s_out, out, t);
      return kExitOk;
    }

    if (ex->parsed()) {
      const Poset poset = read_poset_file(e_poset);
      const RulePtr rule = build_rule(e_rule, poset);
      ExactResult res;
      if (const auto* tau = dynamic_cast<const TauKRule*>(rule.get())) {
        res = exact_success_tau(poset, tau->k(), tau->p());
      } else {
        res = exact_success_rule(poset, *rule);
      }
      Table t{flag_header(*ex), {"poset", "n", "rule", "method", "value", "work"}, {}};
      t.rows.push_back({e_poset, std::uint64_t{poset.size()}, rule->descriptor().to_string(),
                        std::string(method_name(res.method)), res.value, res.work});
      emit(e_out, out, t);
      return kExitOk;
    }

    if (opt->parsed()) {
      const Poset poset = read_poset_file(o_poset);
      const OptimalSolution sol = optimal_value(poset);
      if (!o_table.empty()) {
        std::ofstream file(o_table);
        if (!file) throw ParamError("cannot open table file " + o_table);
        file << sol.table_json().dump(1) << '\n';
      }
      std::uint64_t stop_states = 0;
      for (const auto& node : sol.tree->nodes()) stop_states += node.stop ? 1 : 0;
      Table t{flag_header(*opt), {"poset", "n", "method", "value", "states", "stop_states"}, {}};
      t.rows.push_back({o_poset, std::uint64_t{poset.size()}, std::string(method_name(sol.result.method)),
                        sol.result.value, sol.result.work, stop_states});
      emit(o_out, out, t);
      return kExitOk;
    }

    if (bnd->parsed()) {
      std::vector<double> ps;
      if (b_p) ps.push_back(*b_p);
      else if (!b_grid.empty()) ps = parse_grid(b_grid);
      else ps.push_back(p_star(b_k));
      Table t{flag_header(*bnd), {"k", "p", "formula", "value"}, {}};
      const std::uint64_t k = b_k;
      t.rows.push_back({k, p_star(b_k), std::string("p_star"), p_star(b_k)});
      for (double p : ps) {
        if (!(p > 0.0 && p < 1.0)) throw ParamError("p must lie in (0, 1)");
        const VSeries v = v_series(b_k, p);
        t.rows.push_back({k, p, std::string("chain_lower_bound"), chain_lower_bound(b_k, p)});
        t.rows.push_back({k, p, std::string("known_max_lower_bound"), known_max_lower_bound(b_k, p)});
        t.rows.push_back({k, p, std::string("known_max_conditional"), known_max_conditional_bound(p)});
        t.rows.push_back({k, p, std::string("known_max_event_probability"),
                          known_max_event_probability(b_k, p)});
        t.rows.push_back({k, p, std::string("nb_identity_sum"), nb_identity_sum(b_k, p)});
        t.rows.push_back({k, p, std::string("v_closed_form"), v.closed_form});
        t.rows.push_back({k, p, std::string("v_series"), v.truncated_series});
      }
      emit(b_out, out, t);
      return kExitOk;
    }

    if (yg->parsed()) {
      const YGameSolution sol = y_game_solve(y_spec);
      Table t{flag_header(*yg),
              {"k", "ell", "m", "n", "last_rejected", "u_star", "value", "threshold_value"},
              {}};
      auto row = [&](std::size_t u, std::size_t last_rejected, double value) {
        t.rows.push_back({std::uint64_t{y_spec.k}, std::uint64_t{y_spec.ell}, std::uint64_t{y_spec.m},
                          std::uint64_t{y_spec.n()}, std::uint64_t{last_rejected}, std::uint64_t{u},
                          value, y_game_threshold_value(y_spec, u)});
      };
      row(sol.u_star, sol.last_rejected, sol.value);
      if (y_thresholds) {
        for (std::size_t u = 0; u < y_spec.m; ++u) row(u, u * y_spec.k * y_spec.ell, sol.value);
      }
      emit(y_out, out, t);
      return kExitOk;
    }

    if (ver->parsed()) {
      const auto checks = theorem_checks(v_max_n);
      Table t{flag_header(*ver),
              {"n", "poset_index", "k_max", "width", "claim", "p", "value", "bound", "ok"},
              {}};
      bool all_ok = true;
      for (const auto& c : checks) {
        all_ok = all_ok && c.ok;
        t.rows.push_back({std::uint64_t{c.n}, std::uint64_t{c.index}, std::uint64_t{c.k_max},
                          std::uint64_t{c.width}, c.claim, c.p, c.value, c.bound, c.ok});
      }
      emit(v_out, out, t);
      if (!all_ok) {
        err << "psec: a lower bound was violated\n";
        return kExitViolation;
      }
      return kExitOk;
    }

    if (con->parsed()) {
      Table t{flag_header(*con), {"n", "poset_index", "k_max", "width", "p", "value", "margin"}, {}};
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t n = 1; n <= c_max_n; ++n) {
        const auto posets = enumerate_all_posets(n);
        for (std::size_t i = 0; i < posets.size(); ++i) {
          const std::size_t k = posets[i].maximal_count();
          const double pk = p_star(k);
          const double v = exact_success_tau(posets[i], k, pk).value;
          worst = std::min(worst, v - pk);
          t.rows.push_back({std::uint64_t{n}, std::uint64_t{i}, std::uint64_t{k},
                            std::uint64_t{width_and_chain_cover(posets[i]).width}, pk, v, v - pk});
        }
      }
      t.header.emplace_back("min_margin", format_number(worst));
      emit(c_out, out, t);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "psec: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace psec::cli
