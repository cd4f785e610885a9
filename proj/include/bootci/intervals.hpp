#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "bootci/distributions.hpp"
#include "bootci/errors.hpp"
#include "bootci/resampling.hpp"

namespace bootci {

enum class Method { normal, studentized, percentile, bca, bayesian };

inline constexpr std::array<Method, 5> kAllMethods = {Method::normal, Method::studentized,
                                                      Method::percentile, Method::bca,
                                                      Method::bayesian};

inline constexpr std::string_view to_token(Method m) {
  switch (m) {
    case Method::normal: return "normal";
    case Method::studentized: return "studentized";
    case Method::percentile: return "percentile";
    case Method::bca: return "bca";
    case Method::bayesian: return "bayesian";
  }
  return "";
}

inline std::optional<Method> method_from_token(std::string_view token) {
  for (Method m : kAllMethods)
    if (to_token(m) == token) return m;
  return std::nullopt;
}

struct IntervalMeta {
  std::size_t dropped_pivots = 0;  // studentized: inner SE of zero
  bool z0_clamped = false;         // bca: proportion hit the continuity clamp
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  Method method = Method::normal;
  double level = 0.95;
  double estimate = 0.0;  // point estimate from the original data
  IntervalMeta meta;

  double length() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

namespace detail {

inline void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0,1)");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Constructions from precomputed replicates. These carry the formulas; the
// data-driven entry points below only generate the replicates.

inline Interval normal_from_se(double estimate, double se, double level) {
  detail::check_level(level);
  const double z = std_normal_quantile(1.0 - (1.0 - level) / 2.0);
  const double half = z * se;
  return {estimate - half, estimate + half, Method::normal, level, estimate, {}};
}

/// (alpha/2, 1-alpha/2) empirical quantiles of the replicate values.
inline Interval percentile_from_replicates(std::span<const double> values, double level,
                                           Method tag = Method::percentile) {
  detail::check_level(level);
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const double alpha = 1.0 - level;
  return {quantile_sorted(s, alpha / 2.0), quantile_sorted(s, 1.0 - alpha / 2.0), tag, level, 0.0, {}};
}

/// Bootstrap-t interval from pivots t_b = (theta_b - theta) / se_b. The upper
/// pivot quantile produces the lower endpoint.
inline Interval studentized_from_pivots(double estimate, double se, std::span<const double> pivots,
                                        double level) {
  detail::check_level(level);
  if (pivots.size() < 2) throw DegenerateReplicates("studentized: fewer than 2 finite pivots");
  std::vector<double> s(pivots.begin(), pivots.end());
  std::sort(s.begin(), s.end());
  const double alpha = 1.0 - level;
  const double t_hi = quantile_sorted(s, 1.0 - alpha / 2.0);
  const double t_lo = quantile_sorted(s, alpha / 2.0);
  return {estimate - t_hi * se, estimate - t_lo * se, Method::studentized, level, estimate, {}};
}

/// z0 = Phi^-1(#{theta_b < theta} / B), the proportion clamped to
/// [1/(2B), 1 - 1/(2B)].
inline double bca_bias_correction(std::span<const double> values, double estimate,
                                  bool* clamped = nullptr) {
  const double B = static_cast<double>(values.size());
  const auto below = std::count_if(values.begin(), values.end(), [&](double v) { return v < estimate; });
  const double raw = static_cast<double>(below) / B;
  const double prop = std::clamp(raw, 0.5 / B, 1.0 - 0.5 / B);
  if (clamped) *clamped = (prop != raw);
  return std_normal_quantile(prop);
}

/// Jackknife acceleration sum d^3 / (6 (sum d^2)^{3/2}), d_i = mean - theta_(i).
inline double bca_acceleration(std::span<const double> jackknife) {
  const double jbar = sample_mean(jackknife);
  double s2 = 0.0, s3 = 0.0;
  for (double v : jackknife) {
    const double d = jbar - v;
    s2 += d * d;
    s3 += d * d * d;
  }
  if (s2 == 0.0) return 0.0;
  return s3 / (6.0 * std::pow(s2, 1.5));
}

/// Adjusted quantile levels (alpha_1, alpha_2).
inline std::pair<double, double> bca_levels(double z0, double accel, double level) {
  detail::check_level(level);
  const double alpha = 1.0 - level;
  // Without correction the levels are the nominal ones; skip the Phi(Phi^-1) round trip.
  if (z0 == 0.0 && accel == 0.0) return {alpha / 2.0, 1.0 - alpha / 2.0};
  auto adjust = [&](double z) {
    const double denom = 1.0 - accel * (z0 + z);
    if (!(denom > 0.0)) throw AccelerationOverflow("bca: 1 - a(z0 + z) <= 0");
    return std_normal_cdf(z0 + (z0 + z) / denom);
  };
  return {adjust(std_normal_quantile(alpha / 2.0)), adjust(std_normal_quantile(1.0 - alpha / 2.0))};
}

inline Interval bca_from_replicates(std::span<const double> values, double z0, double accel,
                                    double level) {
  const auto [a1, a2] = bca_levels(z0, accel, level);
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  return {quantile_sorted(s, a1), quantile_sorted(s, a2), Method::bca, level, 0.0, {}};
}

// ---------------------------------------------------------------------------
// Data-driven intervals

template <class URBG>
Interval normal_interval(std::span<const double> x, const Statistic& stat, std::size_t B,
                         double level, URBG& rng) {
  const ReplicateSet reps = bootstrap_replicates(x, stat, B, rng);
  return normal_from_se(reps.origin_estimate, bootstrap_se(reps), level);
}

template <class URBG>
Interval studentized_interval(std::span<const double> x, const Statistic& stat, std::size_t B,
                              std::size_t inner_b, double level, URBG& rng) {
  detail::check_level(level);
  if (B < 2 || inner_b < 2) throw InvalidConfig("studentized: B and inner B must be >= 2");
  if (x.size() < 2) throw InsufficientData("studentized: need at least 2 observations");

  const double estimate = stat.evaluate(x);
  std::vector<double> outer(B);
  std::vector<double> pivots;
  pivots.reserve(B);
  std::vector<double> xb, xbb, inner(inner_b);
  std::size_t dropped = 0;
  for (std::size_t b = 0; b < B; ++b) {
    resample_into(x, xb, rng);
    outer[b] = stat.evaluate(xb);
    for (std::size_t k = 0; k < inner_b; ++k) {
      resample_into(std::span<const double>(xb), xbb, rng);
      inner[k] = stat.evaluate(xbb);
    }
    const double se_b = bootstrap_se(inner);
    const double t = (outer[b] - estimate) / se_b;
    if (se_b > 0.0 && std::isfinite(t)) {
      pivots.push_back(t);
    } else {
      ++dropped;
    }
  }
  Interval ci = studentized_from_pivots(estimate, bootstrap_se(outer), pivots, level);
  ci.meta.dropped_pivots = dropped;
  return ci;
}

template <class URBG>
Interval percentile_interval(std::span<const double> x, const Statistic& stat, std::size_t B,
                             double level, URBG& rng) {
  const ReplicateSet reps = bootstrap_replicates(x, stat, B, rng);
  Interval ci = percentile_from_replicates(reps.values, level);
  ci.estimate = reps.origin_estimate;
  return ci;
}

template <class URBG>
Interval bca_interval(std::span<const double> x, const Statistic& stat, std::size_t B, double level,
                      URBG& rng) {
  detail::check_level(level);
  const ReplicateSet reps = bootstrap_replicates(x, stat, B, rng);
  bool clamped = false;
  const double z0 = bca_bias_correction(reps.values, reps.origin_estimate, &clamped);
  const double accel = bca_acceleration(jackknife_replicates(x, stat));
  Interval ci = bca_from_replicates(reps.values, z0, accel, level);
  ci.estimate = reps.origin_estimate;
  ci.meta.z0_clamped = clamped;
  return ci;
}

/// Credible interval from B Dirichlet(1,...,1)-weighted draws of the
/// statistic.
template <class URBG>
Interval bayesian_interval(std::span<const double> x, const Statistic& stat, std::size_t B,
                           double level, URBG& rng) {
  detail::check_level(level);
  if (x.empty()) throw EmptyInput("bayesian: empty input");
  if (B < 2) throw InvalidConfig("bayesian: B must be >= 2");
  std::vector<double> draws(B);
  std::vector<double> w;
  for (double& d : draws) {
    dirichlet_weights_into(x.size(), w, rng);
    d = stat.evaluate_weighted(x, w);
  }
  Interval ci = percentile_from_replicates(draws, level, Method::bayesian);
  ci.estimate = stat.evaluate(x);
  return ci;
}

/// Dispatch by method tag. `inner_b` is only read by the studentized method.
template <class URBG>
Interval compute_interval(Method method, std::span<const double> x, const Statistic& stat,
                          std::size_t B, std::size_t inner_b, double level, URBG& rng) {
  switch (method) {
    case Method::normal: return normal_interval(x, stat, B, level, rng);
    case Method::studentized: return studentized_interval(x, stat, B, inner_b, level, rng);
    case Method::percentile: return percentile_interval(x, stat, B, level, rng);
    case Method::bca: return bca_interval(x, stat, B, level, rng);
    case Method::bayesian: return bayesian_interval(x, stat, B, level, rng);
  }
  throw InvalidConfig("unknown method");
}

}  // namespace bootci
