#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string_view>
#include <optional>
#include <vector>

#include "bootci/errors.hpp"
#include "bootci/random.hpp"

namespace bootci {

enum class StatKind { mean, sd };

inline constexpr std::string_view to_token(StatKind k) { return k == StatKind::mean ? "mean" : "sd"; }

inline std::optional<StatKind> stat_from_token(std::string_view token) {
  if (token == "mean") return StatKind::mean;
  if (token == "sd") return StatKind::sd;
  return std::nullopt;
}

inline double sample_mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Two-pass sample standard deviation with the n-1 denominator; 0 for n < 2.
inline double sample_sd(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

inline double weighted_mean(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size()) throw LengthMismatch("weighted_mean: data and weights differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
  return s;
}

/// Weighted population sd: sqrt(sum w_i (x_i - mu_w)^2).
inline double weighted_sd(std::span<const double> x, std::span<const double> w) {
  const double mu = weighted_mean(x, w);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * (x[i] - mu) * (x[i] - mu);
  return std::sqrt(s);
}

/// Tally of statistic evaluations, used to audit the resampling budget.
struct EvaluationCounter {
  std::uint64_t count = 0;
};

/// The estimated parameter, in plug-in and Dirichlet-weighted forms.
struct Statistic {
  StatKind kind = StatKind::mean;
  EvaluationCounter* counter = nullptr;

  double evaluate(std::span<const double> x) const {
    if (counter) ++counter->count;
    return kind == StatKind::mean ? sample_mean(x) : sample_sd(x);
  }

  double evaluate_weighted(std::span<const double> x, std::span<const double> w) const {
    if (counter) ++counter->count;
    return kind == StatKind::mean ? weighted_mean(x, w) : weighted_sd(x, w);
  }
};

struct ReplicateSet {
  std::vector<double> values;
  double origin_estimate = 0.0;
};

/// Fills `out` (resized to x.size()) with a with-replacement resample of x.
template <class URBG>
void resample_into(std::span<const double> x, std::vector<double>& out, URBG& rng) {
  if (x.empty()) throw EmptyInput("resample: empty input");
  std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
  out.resize(x.size());
  for (double& v : out) v = x[pick(rng)];
}

template <class URBG>
std::vector<double> resample(std::span<const double> x, URBG& rng) {
  std::vector<double> out;
  resample_into(x, out, rng);
  return out;
}

template <class URBG>
ReplicateSet bootstrap_replicates(std::span<const double> x, const Statistic& stat, std::size_t B,
                                  URBG& rng) {
  if (x.empty()) throw EmptyInput("bootstrap_replicates: empty input");
  if (B < 2) throw InvalidConfig("bootstrap_replicates: B must be >= 2");
  if (x.size() < 2) throw InsufficientData("bootstrap_replicates: need at least 2 observations");
  ReplicateSet reps;
  reps.origin_estimate = stat.evaluate(x);
  reps.values.reserve(B);
  std::vector<double> scratch;
  for (std::size_t b = 0; b < B; ++b) {
    resample_into(x, scratch, rng);
    reps.values.push_back(stat.evaluate(scratch));
  }
  return reps;
}

/// Standard deviation of replicate values with the B-1 denominator.
inline double bootstrap_se(std::span<const double> values) {
  if (values.size() < 2) throw InsufficientData("bootstrap_se: need at least 2 replicates");
  const double m = sample_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

inline double bootstrap_se(const ReplicateSet& reps) { return bootstrap_se(reps.values); }

/// Leave-one-out estimates; element i omits observation i.
inline std::vector<double> jackknife_replicates(std::span<const double> x, const Statistic& stat) {
  const std::size_t n = x.size();
  if (n < 2) throw InsufficientData("jackknife_replicates: need at least 2 observations");
  std::vector<double> out(n);
  std::vector<double> held(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(i), held.begin());
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(i + 1), x.end(),
              held.begin() + static_cast<std::ptrdiff_t>(i));
    out[i] = stat.evaluate(held);
  }
  return out;
}

/// Dirichlet(1,...,1) weights as normalized unit-rate exponentials.
template <class URBG>
void dirichlet_weights_into(std::size_t n, std::vector<double>& w, URBG& rng) {
  w.resize(n);
  double total = 0.0;
  for (double& v : w) {
    v = -std::log(uniform_open01(rng));
    total += v;
  }
  for (double& v : w) v /= total;
}

template <class URBG>
std::vector<double> dirichlet_weights(std::size_t n, URBG& rng) {
  if (n < 1) throw InvalidConfig("dirichlet_weights: n must be >= 1");
  std::vector<double> w;
  dirichlet_weights_into(n, w, rng);
  return w;
}

/// Linear-interpolation quantile of already sorted values: with
/// h = (m-1)p, result = v[floor h] + frac(h) (v[floor h + 1] - v[floor h]).
inline double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw EmptyInput("empirical_quantile: empty input");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("empirical_quantile: p must lie in [0,1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto j = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(j);
  if (j + 1 >= sorted.size() || frac == 0.0) return sorted[j];
  return sorted[j] + frac * (sorted[j + 1] - sorted[j]);
}

inline double empirical_quantile(std::span<const double> values, double p) {
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  return quantile_sorted(s, p);
}

}  // namespace bootci
