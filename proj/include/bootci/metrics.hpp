#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <optional>
#include <utility>
#include <vector>

#include "bootci/copula.hpp"
#include "bootci/errors.hpp"
#include "bootci/resampling.hpp"
#include "bootci/scenario.hpp"

namespace bootci {

/// Fraction of records whose closed interval contains `truth`.
inline double coverage_rate(std::span<const ReplicationRecord> records, double truth) {
  if (records.empty()) throw EmptyInput("coverage_rate: no records");
  const auto hits = std::count_if(records.begin(), records.end(), [&](const ReplicationRecord& r) {
    return r.lower <= truth && truth <= r.upper;
  });
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

struct LengthStats {
  double median = 0.0;
  double mean = 0.0;
};

inline LengthStats length_stats(std::span<const double> lengths) {
  if (lengths.empty()) throw EmptyInput("length_stats: no lengths");
  return {empirical_quantile(lengths, 0.5), sample_mean(lengths)};
}

inline LengthStats length_stats(std::span<const ReplicationRecord> records) {
  std::vector<double> lengths;
  lengths.reserve(records.size());
  for (const auto& r : records) lengths.push_back(r.length);
  return length_stats(lengths);
}

/// Combined score C / sqrt(1 + L), in [0, 1].
inline double indicator(double coverage, double length) { return coverage / std::sqrt(1.0 + length); }

/// Spearman rank correlation (Pearson on average ranks).
inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw LengthMismatch("spearman: sequences differ in length");
  if (x.size() < 3) throw InsufficientData("spearman: need at least 3 pairs");
  return pearson(average_ranks(x), average_ranks(y));
}

/// Per (scenario, method) aggregate.
struct ScenarioSummary {
  ScenarioKey key;
  Method method = Method::normal;
  std::size_t replications_used = 0;
  double coverage = 0.0;
  double median_length = 0.0;
  double mean_length = 0.0;
  double indicator_median = 0.0;
  double indicator_mean = 0.0;
};

/// Summary of the records of one scenario and one method.
inline ScenarioSummary summarize(std::span<const ReplicationRecord> records, double truth) {
  if (records.empty()) throw EmptyInput("summarize: no records");
  ScenarioSummary s;
  s.key = records.front().key;
  s.method = records.front().method;
  s.replications_used = records.size();
  s.coverage = coverage_rate(records, truth);
  const LengthStats ls = length_stats(records);
  s.median_length = ls.median;
  s.mean_length = ls.mean;
  s.indicator_median = indicator(s.coverage, s.median_length);
  s.indicator_mean = indicator(s.coverage, s.mean_length);
  return s;
}

// ---------------------------------------------------------------------------
// Facet aggregation

enum class Facet { none, parameter, delta, distribution, n, level };

inline std::optional<Facet> facet_from_token(std::string_view t) {
  if (t == "none") return Facet::none;
  if (t == "parameter" || t == "param") return Facet::parameter;
  if (t == "delta") return Facet::delta;
  if (t == "distribution" || t == "dist") return Facet::distribution;
  if (t == "n") return Facet::n;
  if (t == "level") return Facet::level;
  return std::nullopt;
}

inline std::string facet_value(const ScenarioKey& key, Facet facet) {
  switch (facet) {
    case Facet::none: return "all";
    case Facet::parameter: return std::string(to_token(key.parameter));
    case Facet::delta: return format_short(key.delta);
    case Facet::distribution: return std::string(to_token(key.distribution));
    case Facet::n: return std::to_string(key.n);
    case Facet::level: return format_short(key.level);
  }
  return "";
}

/// Facet-level figures. Coverage and lengths pool raw records; the
/// averaged indicators are the mean of per-scenario indicators, the pooled
/// ones are computed from the pooled coverage and lengths.
struct FacetSummary {
  std::size_t record_count = 0;
  std::size_t scenario_count = 0;
  double coverage = 0.0;
  double median_length = 0.0;
  double mean_length = 0.0;
  double indicator_median = 0.0;
  double indicator_mean = 0.0;
  double indicator_median_pooled = 0.0;
  double indicator_mean_pooled = 0.0;
};

inline FacetSummary pooled_summary(std::span<const ReplicationRecord> records,
                                   std::span<const ScenarioSummary> scenarios) {
  if (records.empty() || scenarios.empty()) throw EmptyInput("pooled_summary: empty group");
  FacetSummary f;
  f.record_count = records.size();
  f.scenario_count = scenarios.size();
  const auto hits = std::count_if(records.begin(), records.end(), [](const ReplicationRecord& r) { return r.covered; });
  f.coverage = static_cast<double>(hits) / static_cast<double>(records.size());
  const LengthStats ls = length_stats(records);
  f.median_length = ls.median;
  f.mean_length = ls.mean;
  for (const auto& s : scenarios) {
    f.indicator_median += s.indicator_median;
    f.indicator_mean += s.indicator_mean;
  }
  f.indicator_median /= static_cast<double>(scenarios.size());
  f.indicator_mean /= static_cast<double>(scenarios.size());
  f.indicator_median_pooled = indicator(f.coverage, f.median_length);
  f.indicator_mean_pooled = indicator(f.coverage, f.mean_length);
  return f;
}

/// Aggregate from scenario summaries alone. Coverage and mean length are
/// exact record-weighted poolings; the median length is the median of the
/// scenario medians since raw lengths are unavailable.
inline FacetSummary pooled_summary_from_scenarios(std::span<const ScenarioSummary> scenarios) {
  if (scenarios.empty()) throw EmptyInput("pooled_summary: empty group");
  FacetSummary f;
  f.scenario_count = scenarios.size();
  double covered = 0.0, length_sum = 0.0;
  std::vector<double> medians;
  for (const auto& s : scenarios) {
    f.record_count += s.replications_used;
    covered += s.coverage * static_cast<double>(s.replications_used);
    length_sum += s.mean_length * static_cast<double>(s.replications_used);
    medians.push_back(s.median_length);
    f.indicator_median += s.indicator_median;
    f.indicator_mean += s.indicator_mean;
  }
  if (f.record_count == 0) throw EmptyInput("pooled_summary: no records in group");
  f.coverage = covered / static_cast<double>(f.record_count);
  f.mean_length = length_sum / static_cast<double>(f.record_count);
  f.median_length = empirical_quantile(medians, 0.5);
  f.indicator_median /= static_cast<double>(scenarios.size());
  f.indicator_mean /= static_cast<double>(scenarios.size());
  f.indicator_median_pooled = indicator(f.coverage, f.median_length);
  f.indicator_mean_pooled = indicator(f.coverage, f.mean_length);
  return f;
}

struct FacetRow {
  Method method;
  std::string facet_level;
  FacetSummary summary;
};

/// One row per (method, facet level), methods in canonical order and facet
/// levels in first-appearance order. With `records` empty the rows are built
/// from the summaries alone.
inline std::vector<FacetRow> facet_table(std::span<const ReplicationRecord> records,
                                         std::span<const ScenarioSummary> summaries, Facet facet) {
  std::vector<std::string> levels;
  std::map<std::pair<Method, std::string>, std::vector<ScenarioSummary>> by_group;
  for (const auto& s : summaries) {
    std::string v = facet_value(s.key, facet);
    if (std::find(levels.begin(), levels.end(), v) == levels.end()) levels.push_back(v);
    by_group[{s.method, std::move(v)}].push_back(s);
  }
  std::map<std::pair<Method, std::string>, std::vector<ReplicationRecord>> records_by_group;
  for (const auto& r : records) records_by_group[{r.method, facet_value(r.key, facet)}].push_back(r);

  std::vector<FacetRow> rows;
  for (Method m : kAllMethods) {
    for (const auto& level : levels) {
      const auto s_it = by_group.find({m, level});
      if (s_it == by_group.end()) continue;
      if (records.empty()) {
        rows.push_back({m, level, pooled_summary_from_scenarios(s_it->second)});
        continue;
      }
      const auto r_it = records_by_group.find({m, level});
      if (r_it == records_by_group.end()) continue;
      rows.push_back({m, level, pooled_summary(r_it->second, s_it->second)});
    }
  }
  return rows;
}

inline const FacetRow* find_row(std::span<const FacetRow> rows, Method m, std::string_view level) {
  for (const auto& r : rows)
    if (r.method == m && r.facet_level == level) return &r;
  return nullptr;
}

/// Rank correlations between the per-scenario indicator and its two inputs,
/// for both the square-root and the plain C/(1+L) forms.
struct IndicatorBalance {
  double sqrt_vs_length = 0.0;
  double sqrt_vs_coverage = 0.0;
  double plain_vs_length = 0.0;
  double plain_vs_coverage = 0.0;
};

inline IndicatorBalance indicator_balance(std::span<const ScenarioSummary> summaries) {
  std::vector<double> ind, plain, len, cov;
  for (const auto& s : summaries) {
    ind.push_back(s.indicator_median);
    plain.push_back(s.coverage / (1.0 + s.median_length));
    len.push_back(s.median_length);
    cov.push_back(s.coverage);
  }
  return {spearman(ind, len), spearman(ind, cov), spearman(plain, len), spearman(plain, cov)};
}

}  // namespace bootci
