// bootci: simulation study driver and single-dataset interval tool.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "bootci/bootci.hpp"

namespace {

using namespace bootci;

struct SimulateOptions {
  std::string grid = "paper";
  std::uint64_t seed = 42;
  std::size_t reps = 100;
  std::size_t outer_b = 100;
  std::size_t inner_b = 100;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::string out_dir = "out";
  double dof = kDefaultStudentDof;
  std::vector<double> deltas, levels;
  std::vector<std::string> dists, params, methods;
  std::vector<std::size_t> sizes;
};

template <class T, class Parse>
std::vector<T> parse_tokens(const std::vector<std::string>& tokens, Parse parse, const char* what) {
  std::vector<T> out;
  for (const auto& t : tokens) {
    const auto v = parse(t);
    if (!v) throw InvalidConfig(std::string("unknown ") + what + " '" + t + "'");
    out.push_back(*v);
  }
  return out;
}

GridConfig make_config(const SimulateOptions& o, const CLI::App& cmd) {
  GridConfig cfg;
  if (o.grid == "smoke") cfg = smoke_grid();
  else if (o.grid == "paper" || o.grid == "custom") cfg = paper_grid();
  else throw InvalidConfig("unknown grid preset '" + o.grid + "'");

  // Explicit flags override the preset.
  if (cmd.count("--seed")) cfg.master_seed = o.seed;
  if (cmd.count("--reps")) cfg.replications = o.reps;
  if (cmd.count("--outer-b")) cfg.outer_b = o.outer_b;
  if (cmd.count("--inner-b")) cfg.inner_b = o.inner_b;
  if (cmd.count("--dof")) cfg.student_dof = o.dof;
  if (!o.deltas.empty()) cfg.deltas = o.deltas;
  if (!o.levels.empty()) cfg.levels = o.levels;
  if (!o.sizes.empty()) cfg.sizes = o.sizes;
  if (!o.dists.empty()) cfg.distributions = parse_tokens<Family>(o.dists, family_from_token, "distribution");
  if (!o.params.empty()) cfg.parameters = parse_tokens<StatKind>(o.params, stat_from_token, "parameter");
  if (!o.methods.empty()) cfg.methods = parse_tokens<Method>(o.methods, method_from_token, "method");
  return cfg;
}

int cmd_simulate(const SimulateOptions& o, const CLI::App& cmd) {
  const GridConfig cfg = make_config(o, cmd);
  const GridResult result = run_grid(cfg, o.threads);
  write_outputs(o.out_dir, cfg, result, o.threads);
  std::cerr << "scenarios=" << result.scenarios.size() << " records=" << result.records.size()
            << " failures=" << result.failures.size() << " wall=" << result.wall_seconds << "s\n";
  for (const auto& f : result.failures)
    std::cerr << "failure: " << f.scenario_id << " rep " << f.replication << " " << to_token(f.method)
              << ": " << f.error << '\n';
  return result.failures.empty() ? 0 : 1;
}

struct CiOptions {
  std::string data;
  std::string method = "percentile";
  std::string param = "mean";
  double level = 0.95;
  std::size_t outer_b = 100;
  std::size_t inner_b = 100;
  std::uint64_t seed = 42;
};

int cmd_ci(const CiOptions& o) {
  std::ifstream is(o.data);
  if (!is) throw IoError("cannot open " + o.data);
  const std::vector<double> x = read_data_column(is);
  const auto method = method_from_token(o.method);
  const auto param = stat_from_token(o.param);
  if (!method) throw InvalidConfig("unknown method '" + o.method + "'");
  if (!param) throw InvalidConfig("unknown parameter '" + o.param + "'");
  if (x.empty()) throw EmptyInput("no data values in " + o.data);

  Rng rng = SeedBuilder(o.seed).add("ci").add(o.method).engine();
  const Interval ci = compute_interval(*method, x, Statistic{*param}, o.outer_b, o.inner_b, o.level, rng);
  std::cout << "method: " << to_token(ci.method) << '\n'
            << "parameter: " << to_token(*param) << '\n'
            << "level: " << format_short(ci.level) << '\n'
            << "n: " << x.size() << '\n'
            << "estimate: " << format_float(ci.estimate) << '\n'
            << "lower: " << format_float(ci.lower) << '\n'
            << "upper: " << format_float(ci.upper) << '\n'
            << "length: " << format_float(ci.length()) << '\n';
  if (const auto flags = record_flags(ci.meta); !flags.empty()) std::cout << "flags: " << flags << '\n';
  return 0;
}

struct CopulaOptions {
  double delta = 1.0;
  std::size_t n = 100000;
  std::uint64_t seed = 42;
};

int cmd_copula_check(const CopulaOptions& o) {
  if (o.n < 1000) throw InvalidConfig("copula-check needs n >= 1000");
  Rng rng = SeedBuilder(o.seed).add("copula-check").engine();
  const auto u = simulate_chain(o.n, o.delta, rng);
  std::cout << "delta: " << format_short(o.delta) << '\n'
            << "n: " << o.n << '\n'
            << "lag1_spearman: " << spearman_lag(u, 1) << " (expected " << o.delta / 3.0 << ")\n"
            << "lag2_spearman: " << spearman_lag(u, 2) << " (expected " << o.delta / 9.0 << ")\n"
            << "ks_distance: " << ks_distance_uniform(u) << " (1% critical " << ks_critical_1pct(o.n) << ")\n";
  return 0;
}

struct ReportOptions {
  std::string summary;
  std::string records;
  std::string facet = "none";
  double threshold = 100.0;
  std::string out;
};

int cmd_report(const ReportOptions& o) {
  const auto facet = facet_from_token(o.facet);
  if (!facet) throw InvalidConfig("unknown facet '" + o.facet + "' (none, parameter, delta, distribution, n, level)");
  const auto summaries = read_summary_csv(o.summary);
  std::vector<ReplicationRecord> records;
  if (!o.records.empty()) records = read_records_csv(o.records);
  const auto rows = facet_table(records, summaries, *facet);

  if (records.empty())
    std::cout << "# median_length is the median of scenario medians (no records file given)\n";
  write_facet_table(std::cout, rows, o.facet);
  if (!o.out.empty()) {
    std::ofstream os(o.out, std::ios::binary);
    if (!os) throw IoError("cannot open " + o.out + " for writing");
    write_facet_table(os, rows, o.facet);
  }
  if (summaries.size() >= 3) {
    std::cout << '\n';
    write_indicator_balance(std::cout, indicator_balance(summaries));
  }
  if (!records.empty()) {
    std::cout << '\n';
    write_audit_table(std::cout, audit_extreme_lengths(records, o.threshold));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bootstrap confidence interval study: simulation, single-dataset intervals, diagnostics"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run the factorial Monte Carlo study");
  simulate->add_option("--grid", sim.grid, "Preset: paper, smoke or custom")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--reps", sim.reps, "Replications per scenario")->capture_default_str();
  simulate->add_option("--outer-b", sim.outer_b, "Bootstrap replicates B")->capture_default_str();
  simulate->add_option("--inner-b", sim.inner_b, "Inner replicates for the studentized method")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Worker threads")->capture_default_str();
  simulate->add_option("--out-dir", sim.out_dir, "Output directory")->capture_default_str();
  simulate->add_option("--dof", sim.dof, "Student-t degrees of freedom")->capture_default_str();
  simulate->add_option("--delta", sim.deltas, "FGM delta levels (default -1 0 1)");
  simulate->add_option("--dist", sim.dists, "Distributions (default all five)");
  simulate->add_option("--n", sim.sizes, "Sample sizes (default 10 20 100)");
  simulate->add_option("--level", sim.levels, "Confidence levels (default 0.8 0.95 0.99)");
  simulate->add_option("--param", sim.params, "Parameters: mean, sd (default both)");
  simulate->add_option("--method", sim.methods, "Methods (default all five)");

  CiOptions ci;
  auto* ci_cmd = app.add_subcommand("ci", "Compute one interval for a data file (one value per line)");
  ci_cmd->add_option("data", ci.data, "Data file")->required();
  ci_cmd->add_option("--method", ci.method, "normal, studentized, percentile, bca, bayesian")->capture_default_str();
  ci_cmd->add_option("--param", ci.param, "mean or sd")->capture_default_str();
  ci_cmd->add_option("--level", ci.level, "Confidence level")->capture_default_str();
  ci_cmd->add_option("--outer-b,-B", ci.outer_b, "Bootstrap replicates")->capture_default_str();
  ci_cmd->add_option("--inner-b", ci.inner_b, "Inner replicates (studentized)")->capture_default_str();
  ci_cmd->add_option("--seed", ci.seed, "Seed")->capture_default_str();

  CopulaOptions cop;
  auto* cop_cmd = app.add_subcommand("copula-check", "Dependence diagnostics of the FGM Markov chain");
  cop_cmd->add_option("--delta", cop.delta, "FGM delta in [-1, 1]")->capture_default_str();
  cop_cmd->add_option("--n", cop.n, "Chain length (>= 1000)")->capture_default_str();
  cop_cmd->add_option("--seed", cop.seed, "Seed")->capture_default_str();

  ReportOptions rep;
  auto* rep_cmd = app.add_subcommand("report", "Facet tables from simulation output");
  rep_cmd->add_option("--summary", rep.summary, "summary.csv")->required();
  rep_cmd->add_option("--records", rep.records, "records.csv (enables pooled medians and the length audit)");
  rep_cmd->add_option("--facet", rep.facet, "none, parameter, delta, distribution, n, level")->capture_default_str();
  rep_cmd->add_option("--threshold", rep.threshold, "Audit length threshold")->capture_default_str();
  rep_cmd->add_option("--out", rep.out, "Also write the facet table to this CSV file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(sim, *simulate);
    if (*ci_cmd) return cmd_ci(ci);
    if (*cop_cmd) return cmd_copula_check(cop);
    if (*rep_cmd) return cmd_report(rep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
