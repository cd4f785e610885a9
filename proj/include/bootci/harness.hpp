#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "bootci/copula.hpp"
#include "bootci/distributions.hpp"
#include "bootci/errors.hpp"
#include "bootci/intervals.hpp"
#include "bootci/metrics.hpp"
#include "bootci/random.hpp"
#include "bootci/resampling.hpp"
#include "bootci/scenario.hpp"

namespace bootci {

/// Factor levels and budgets of a simulation run. The defaults are the
/// full reference design: 2 x 3 x 5 x 3 x 3 = 270 scenarios.
struct GridConfig {
  std::vector<StatKind> parameters{StatKind::mean, StatKind::sd};
  std::vector<double> deltas{-1.0, 0.0, 1.0};
  std::vector<Family> distributions{kAllFamilies.begin(), kAllFamilies.end()};
  std::vector<std::size_t> sizes{10, 20, 100};
  std::vector<double> levels{0.8, 0.95, 0.99};
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  std::size_t outer_b = 100;
  std::size_t inner_b = 100;
  std::size_t replications = 100;
  std::uint64_t master_seed = 42;
  double student_dof = kDefaultStudentDof;
  double target_mean = 5.0;
  double target_sd = 5.0;
};

inline GridConfig paper_grid() { return GridConfig{}; }

/// One scenario, ten replications.
inline GridConfig smoke_grid() {
  GridConfig c;
  c.parameters = {StatKind::mean};
  c.deltas = {0.0};
  c.distributions = {Family::normal};
  c.sizes = {20};
  c.levels = {0.95};
  c.replications = 10;
  return c;
}

/// Cartesian product in the order parameter, delta, distribution, n, level.
inline std::vector<Scenario> build_grid(const GridConfig& cfg) {
  if (cfg.parameters.empty() || cfg.deltas.empty() || cfg.distributions.empty() ||
      cfg.sizes.empty() || cfg.levels.empty() || cfg.methods.empty())
    throw InvalidConfig("build_grid: every factor needs at least one level");
  if (cfg.outer_b < 2 || cfg.inner_b < 2) throw InvalidConfig("build_grid: resample budgets must be >= 2");
  if (cfg.replications < 1) throw InvalidConfig("build_grid: replications must be >= 1");
  for (double d : cfg.deltas)
    if (!(d >= -1.0 && d <= 1.0)) throw InvalidConfig("build_grid: delta outside [-1, 1]");
  for (std::size_t n : cfg.sizes)
    if (n < 2) throw InvalidConfig("build_grid: sample size must be >= 2");
  for (double l : cfg.levels)
    if (!(l > 0.0 && l < 1.0)) throw InvalidConfig("build_grid: level outside (0, 1)");

  std::vector<Scenario> grid;
  for (StatKind p : cfg.parameters)
    for (double d : cfg.deltas)
      for (Family f : cfg.distributions)
        for (std::size_t n : cfg.sizes)
          for (double l : cfg.levels) {
            Scenario s;
            s.key = {make_scenario_id(p, d, f, n, l), p, f, d, n, l};
            s.outer_b = cfg.outer_b;
            s.inner_b = cfg.inner_b;
            s.replications = cfg.replications;
            s.master_seed = cfg.master_seed;
            s.student_dof = cfg.student_dof;
            s.target_mean = cfg.target_mean;
            s.target_sd = cfg.target_sd;
            grid.push_back(std::move(s));
          }

  std::vector<std::string> ids;
  for (const auto& s : grid) ids.push_back(s.id());
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw InvalidConfig("build_grid: duplicate factor levels");
  return grid;
}

enum class StreamRole { sample, resample };

inline constexpr std::string_view to_token(StreamRole r) { return r == StreamRole::sample ? "sample" : "resample"; }

/// Engine for one (key, replication, method, role) tuple. The sample role
/// ignores the method so that every method sees the same data.
inline Rng derive_seed(std::uint64_t master_seed, std::string_view key, std::size_t replication,
                       std::string_view method, StreamRole role) {
  SeedBuilder sb(master_seed);
  sb.add(to_token(role)).add(key).add(static_cast<std::uint64_t>(replication));
  if (role != StreamRole::sample) sb.add(method);
  return sb.engine();
}

/// The realized sample of a replication. Keyed by the data-generating cell
/// so scenarios that differ only in parameter or level share it.
inline std::vector<double> draw_sample(const Scenario& s, std::size_t replication) {
  const DistributionSpec dist =
      make_distribution(s.key.distribution, s.target_mean, s.target_sd, s.student_dof);
  Rng rng = derive_seed(s.master_seed, sample_cell_id(s.key), replication, "", StreamRole::sample);
  return sample(dist, s.key.n, s.key.delta, rng);
}

struct ReplicationFailure {
  std::string scenario_id;
  std::size_t replication = 0;
  Method method = Method::normal;
  std::string error;
};

struct ReplicationOutcome {
  std::vector<ReplicationRecord> records;
  std::vector<ReplicationFailure> failures;
  std::uint64_t evaluations = 0;
};

inline std::string record_flags(const IntervalMeta& meta) {
  std::string flags;
  if (meta.dropped_pivots > 0) flags += "dropped_pivots=" + std::to_string(meta.dropped_pivots);
  if (meta.z0_clamped) {
    if (!flags.empty()) flags += ';';
    flags += "z0_clamped";
  }
  return flags;
}

/// Applies every configured method to one sample. A method that throws
/// leaves no record and is reported as a failure instead.
inline ReplicationOutcome run_replication(const Scenario& s, std::size_t replication,
                                          std::span<const Method> methods = kAllMethods) {
  ReplicationOutcome out;
  const std::vector<double> x = draw_sample(s, replication);
  EvaluationCounter counter;
  const Statistic stat{s.key.parameter, &counter};
  const double truth = s.truth();
  for (Method m : methods) {
    Rng rng = derive_seed(s.master_seed, s.id(), replication, to_token(m), StreamRole::resample);
    try {
      const Interval ci = compute_interval(m, x, stat, s.outer_b, s.inner_b, s.key.level, rng);
      ReplicationRecord r;
      r.key = s.key;
      r.replication = replication;
      r.method = m;
      r.lower = ci.lower;
      r.upper = ci.upper;
      r.length = ci.upper - ci.lower;
      r.covered = ci.contains(truth);
      r.flags = record_flags(ci.meta);
      out.records.push_back(std::move(r));
    } catch (const Error& e) {
      out.failures.push_back({s.id(), replication, m, e.what()});
    }
  }
  out.evaluations = counter.count;
  return out;
}

/// Statistic evaluations one replication must perform: 1 + B for normal and
/// percentile, 1 + B + n for BCa, 1 + B for Bayesian, 1 + B + B * B_inner
/// for studentized.
inline std::uint64_t expected_evaluations(const Scenario& s, std::span<const Method> methods = kAllMethods) {
  std::uint64_t total = 0;
  for (Method m : methods) {
    total += 1 + s.outer_b;
    if (m == Method::bca) total += s.key.n;
    if (m == Method::studentized) total += static_cast<std::uint64_t>(s.outer_b) * s.inner_b;
  }
  return total;
}

struct GridResult {
  std::vector<Scenario> scenarios;
  std::vector<ReplicationRecord> records;
  std::vector<ScenarioSummary> summaries;
  std::vector<ReplicationFailure> failures;
  std::uint64_t evaluations = 0;
  std::uint64_t expected_evaluations = 0;
  double wall_seconds = 0.0;
};

/// Runs every scenario x replication task on `parallelism` threads. Results
/// are collected per task and concatenated in grid order, so the output does
/// not depend on scheduling.
inline GridResult run_grid(const GridConfig& cfg, std::size_t parallelism) {
  if (parallelism < 1) throw InvalidConfig("run_grid: parallelism must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  GridResult result;
  result.scenarios = build_grid(cfg);
  const std::size_t reps = cfg.replications;
  const std::size_t tasks = result.scenarios.size() * reps;

  std::vector<ReplicationOutcome> outcomes(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) {
      const Scenario& s = result.scenarios[t / reps];
      try {
        outcomes[t] = run_replication(s, t % reps, cfg.methods);
      } catch (const Error& e) {
        for (Method m : cfg.methods) outcomes[t].failures.push_back({s.id(), t % reps, m, e.what()});
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t threads = std::min(parallelism, std::max<std::size_t>(tasks, 1));
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t si = 0; si < result.scenarios.size(); ++si) {
    const Scenario& s = result.scenarios[si];
    std::map<Method, std::vector<ReplicationRecord>> by_method;
    for (std::size_t r = 0; r < reps; ++r) {
      auto& o = outcomes[si * reps + r];
      result.evaluations += o.evaluations;
      result.expected_evaluations += expected_evaluations(s, cfg.methods);
      for (auto& f : o.failures) result.failures.push_back(std::move(f));
      for (auto& rec : o.records) by_method[rec.method].push_back(rec);
      for (auto& rec : o.records) result.records.push_back(std::move(rec));
    }
    for (Method m : cfg.methods) {
      const auto it = by_method.find(m);
      if (it == by_method.end() || it->second.empty()) continue;
      result.summaries.push_back(summarize(it->second, s.truth()));
    }
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// ---------------------------------------------------------------------------
// Extreme-length audit

struct AuditRow {
  Method method;
  StatKind parameter;
  Family distribution;
  std::size_t count = 0;
};

struct AuditTable {
  double threshold = 0.0;
  std::size_t total = 0;
  std::vector<AuditRow> rows;  // nonzero cells only, canonical order

  std::size_t count_if(auto pred) const {
    std::size_t c = 0;
    for (const auto& r : rows)
      if (pred(r)) c += r.count;
    return c;
  }
};

/// Records with length strictly above `threshold`, tabulated by method,
/// parameter and distribution.
inline AuditTable audit_extreme_lengths(std::span<const ReplicationRecord> records, double threshold) {
  AuditTable table;
  table.threshold = threshold;
  std::map<std::tuple<Method, StatKind, Family>, std::size_t> cells;
  for (const auto& r : records)
    if (r.length > threshold) {
      ++cells[{r.method, r.key.parameter, r.key.distribution}];
      ++table.total;
    }
  for (const auto& [k, count] : cells)
    table.rows.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), count});
  return table;
}

}  // namespace bootci
