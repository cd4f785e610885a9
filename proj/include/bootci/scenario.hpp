#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>

#include "bootci/distributions.hpp"
#include "bootci/intervals.hpp"
#include "bootci/resampling.hpp"

namespace bootci {

/// Shortest "%g" rendering, used inside identifiers.
inline std::string format_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// 17 significant digits, the CSV float format.
inline std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// The factor levels identifying one cell of the factorial design.
struct ScenarioKey {
  std::string id;
  StatKind parameter = StatKind::mean;
  Family distribution = Family::normal;
  double delta = 0.0;
  std::size_t n = 10;
  double level = 0.95;
};

inline std::string make_scenario_id(StatKind parameter, double delta, Family distribution,
                                    std::size_t n, double level) {
  return std::string(to_token(parameter)) + "-d" + format_short(delta) + "-" +
         std::string(to_token(distribution)) + "-n" + std::to_string(n) + "-l" + format_short(level);
}

/// Identifier of the data-generating cell (distribution, delta, n). Every
/// scenario sharing it sees the same samples.
inline std::string sample_cell_id(const ScenarioKey& key) {
  return std::string(to_token(key.distribution)) + "-d" + format_short(key.delta) + "-n" +
         std::to_string(key.n);
}

struct Scenario {
  ScenarioKey key;
  std::size_t outer_b = 100;
  std::size_t inner_b = 100;
  std::size_t replications = 100;
  std::uint64_t master_seed = 42;
  double student_dof = kDefaultStudentDof;
  double target_mean = 5.0;
  double target_sd = 5.0;

  const std::string& id() const { return key.id; }

  /// The value every interval should cover.
  double truth() const { return key.parameter == StatKind::mean ? target_mean : target_sd; }
};

/// One (scenario, replication, method) outcome.
struct ReplicationRecord {
  ScenarioKey key;
  std::size_t replication = 0;
  Method method = Method::normal;
  double lower = 0.0;
  double upper = 0.0;
  double length = 0.0;
  bool covered = false;
  std::string flags;
};

}  // namespace bootci
