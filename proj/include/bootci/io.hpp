#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "bootci/errors.hpp"
#include "bootci/harness.hpp"
#include "bootci/metrics.hpp"
#include "bootci/scenario.hpp"

namespace bootci {

class IoError : public Error { using Error::Error; };
class SchemaError : public Error { using Error::Error; };

inline constexpr std::string_view kRecordsHeader =
    "scenario_id,parameter,distribution,delta,n,level,method,replication,lower,upper,length,covered,flags";
inline constexpr std::string_view kSummaryHeader =
    "scenario_id,parameter,distribution,delta,n,level,method,replications_used,coverage,median_length,"
    "mean_length,indicator_median,indicator_mean";

namespace detail {

inline void write_key(std::ostream& os, const ScenarioKey& k) {
  os << k.id << ',' << to_token(k.parameter) << ',' << to_token(k.distribution) << ','
     << format_float(k.delta) << ',' << k.n << ',' << format_float(k.level) << ',';
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError("line " + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

inline std::size_t parse_count(const std::string& s, std::size_t line) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError("line " + std::to_string(line) + ": not a count: '" + s + "'");
  return v;
}

/// Header-indexed CSV table. Only the columns in `required` are checked.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::unordered_map<std::string, std::size_t> index;

  const std::string& at(std::size_t row, const std::string& col) const { return rows[row][index.at(col)]; }
};

inline CsvTable read_csv(std::istream& is, std::string_view expected_header) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw SchemaError("empty file: expected header '" + std::string(expected_header) + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split_csv_line(line);
  for (std::size_t i = 0; i < t.header.size(); ++i) t.index[t.header[i]] = i;

  std::string missing;
  for (const auto& col : split_csv_line(expected_header))
    if (!t.index.contains(col)) missing += (missing.empty() ? "" : ",") + col;
  if (!missing.empty())
    throw SchemaError("schema mismatch: missing column(s) " + missing + "; found " + line);

  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != t.header.size())
      throw SchemaError("line " + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                        " fields, got " + std::to_string(cells.size()));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

inline ScenarioKey read_key(const CsvTable& t, std::size_t row) {
  const std::size_t line = row + 2;
  ScenarioKey k;
  k.id = t.at(row, "scenario_id");
  const auto p = stat_from_token(t.at(row, "parameter"));
  const auto f = family_from_token(t.at(row, "distribution"));
  if (!p) throw SchemaError("line " + std::to_string(line) + ": unknown parameter '" + t.at(row, "parameter") + "'");
  if (!f) throw SchemaError("line " + std::to_string(line) + ": unknown distribution '" + t.at(row, "distribution") + "'");
  k.parameter = *p;
  k.distribution = *f;
  k.delta = parse_double(t.at(row, "delta"), line);
  k.n = parse_count(t.at(row, "n"), line);
  k.level = parse_double(t.at(row, "level"), line);
  return k;
}

inline Method read_method(const CsvTable& t, std::size_t row) {
  const auto m = method_from_token(t.at(row, "method"));
  if (!m) throw SchemaError("line " + std::to_string(row + 2) + ": unknown method '" + t.at(row, "method") + "'");
  return *m;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return is;
}

}  // namespace detail

inline void write_records_csv(std::ostream& os, std::span<const ReplicationRecord> records) {
  os << kRecordsHeader << '\n';
  for (const auto& r : records) {
    detail::write_key(os, r.key);
    os << to_token(r.method) << ',' << r.replication << ',' << format_float(r.lower) << ','
       << format_float(r.upper) << ',' << format_float(r.length) << ','
       << (r.covered ? "true" : "false") << ',' << r.flags << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, std::span<const ScenarioSummary> summaries) {
  os << kSummaryHeader << '\n';
  for (const auto& s : summaries) {
    detail::write_key(os, s.key);
    os << to_token(s.method) << ',' << s.replications_used << ',' << format_float(s.coverage) << ','
       << format_float(s.median_length) << ',' << format_float(s.mean_length) << ','
       << format_float(s.indicator_median) << ',' << format_float(s.indicator_mean) << '\n';
  }
}

inline std::vector<ReplicationRecord> read_records_csv(std::istream& is) {
  const auto t = detail::read_csv(is, kRecordsHeader);
  std::vector<ReplicationRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::size_t line = i + 2;
    ReplicationRecord r;
    r.key = detail::read_key(t, i);
    r.method = detail::read_method(t, i);
    r.replication = detail::parse_count(t.at(i, "replication"), line);
    r.lower = detail::parse_double(t.at(i, "lower"), line);
    r.upper = detail::parse_double(t.at(i, "upper"), line);
    r.length = detail::parse_double(t.at(i, "length"), line);
    const auto& cov = t.at(i, "covered");
    if (cov != "true" && cov != "false")
      throw SchemaError("line " + std::to_string(line) + ": covered must be true or false");
    r.covered = cov == "true";
    r.flags = t.at(i, "flags");
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<ScenarioSummary> read_summary_csv(std::istream& is) {
  const auto t = detail::read_csv(is, kSummaryHeader);
  std::vector<ScenarioSummary> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::size_t line = i + 2;
    ScenarioSummary s;
    s.key = detail::read_key(t, i);
    s.method = detail::read_method(t, i);
    s.replications_used = detail::parse_count(t.at(i, "replications_used"), line);
    s.coverage = detail::parse_double(t.at(i, "coverage"), line);
    s.median_length = detail::parse_double(t.at(i, "median_length"), line);
    s.mean_length = detail::parse_double(t.at(i, "mean_length"), line);
    s.indicator_median = detail::parse_double(t.at(i, "indicator_median"), line);
    s.indicator_mean = detail::parse_double(t.at(i, "indicator_mean"), line);
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<ReplicationRecord> read_records_csv(const std::filesystem::path& path) {
  auto is = detail::open_in(path);
  return read_records_csv(is);
}

inline std::vector<ScenarioSummary> read_summary_csv(const std::filesystem::path& path) {
  auto is = detail::open_in(path);
  return read_summary_csv(is);
}

inline nlohmann::json run_report_json(const GridConfig& cfg, const GridResult& result,
                                      std::size_t parallelism) {
  using nlohmann::json;
  json failures = json::array();
  for (const auto& f : result.failures)
    failures.push_back({{"scenario_id", f.scenario_id},
                        {"replication", f.replication},
                        {"method", to_token(f.method)},
                        {"error", f.error}});
  std::map<std::string, std::size_t> by_method;
  for (const auto& f : result.failures) ++by_method[std::string(to_token(f.method))];

  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(to_token(m));
  return {
      {"tool", "bootci"},
      {"version", "1.0.0"},
      {"master_seed", cfg.master_seed},
      {"scenarios", result.scenarios.size()},
      {"replications", cfg.replications},
      {"outer_b", cfg.outer_b},
      {"inner_b", cfg.inner_b},
      {"student_dof", cfg.student_dof},
      {"methods", methods},
      {"parallelism", parallelism},
      {"records", result.records.size()},
      {"summaries", result.summaries.size()},
      {"failure_count", result.failures.size()},
      {"failures_by_method", by_method},
      {"failures", failures},
      {"statistic_evaluations", result.evaluations},
      {"expected_statistic_evaluations", result.expected_evaluations},
      {"wall_seconds", result.wall_seconds},
  };
}

/// Writes records.csv, summary.csv and run_report.json into `dir`.
inline void write_outputs(const std::filesystem::path& dir, const GridConfig& cfg,
                          const GridResult& result, std::size_t parallelism) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  {
    auto os = detail::open_out(dir / "records.csv");
    write_records_csv(os, result.records);
  }
  {
    auto os = detail::open_out(dir / "summary.csv");
    write_summary_csv(os, result.summaries);
  }
  auto os = detail::open_out(dir / "run_report.json");
  os << run_report_json(cfg, result, parallelism).dump(2) << '\n';
  if (!os) throw IoError("write failed in " + dir.string());
}

/// One value per line; blank lines and '#' comments are skipped.
inline std::vector<double> read_data_column(std::istream& is) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    out.push_back(detail::parse_double(token, lineno));
  }
  return out;
}

}  // namespace bootci
