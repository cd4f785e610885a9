#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "bootci/distributions.hpp"
#include "bootci/errors.hpp"
#include "bootci/random.hpp"

namespace bootci {

/// Farlie-Gumbel-Morgenstern copula C(u,v) = uv + delta*uv(1-u)(1-v).
struct CopulaConfig {
  double delta = 0.0;

  explicit CopulaConfig(double d = 0.0) : delta(d) {
    if (!(d >= -1.0 && d <= 1.0)) throw DomainError("CopulaConfig: delta must lie in [-1, 1]");
  }
};

// Below this |delta (1 - 2 u_prev)| the conditional law is the identity.
inline constexpr double kFgmDegenerateSlope = 1e-12;

/// P(U_i <= v | U_{i-1} = u_prev), the u-partial derivative of the copula.
inline double fgm_conditional_cdf(double v, double u_prev, double delta) {
  return v + delta * v * (1.0 - v) * (1.0 - 2.0 * u_prev);
}

/// Inverts fgm_conditional_cdf in v. The root of a v^2 - (1+a) v + f = 0
/// inside [0,1] is (1 + a - sqrt(disc)) / (2a); it is evaluated here as
/// 2f / (1 + a + sqrt(disc)), which is the same number without the
/// cancellation as a -> 0.
inline double fgm_conditional_inverse(double u_prev, double f, double delta) {
  const double a = delta * (1.0 - 2.0 * u_prev);
  if (std::fabs(a) < kFgmDegenerateSlope) return f;
  // (1+a)^2 - 4fa >= (1-a)^2 >= 0 analytically.
  const double disc = std::max(0.0, (1.0 + a) * (1.0 + a) - 4.0 * f * a);
  return 2.0 * f / (1.0 + a + std::sqrt(disc));
}

/// Markov chain U_1..U_n with FGM(delta) adjacent pairs and Uniform(0,1)
/// marginals.
template <class URBG>
std::vector<double> simulate_chain(std::size_t n, double delta, URBG& rng) {
  if (n < 1) throw InvalidConfig("simulate_chain: n must be >= 1");
  CopulaConfig cfg(delta);
  std::vector<double> u(n);
  u[0] = uniform_open01(rng);
  for (std::size_t i = 1; i < n; ++i)
    u[i] = fgm_conditional_inverse(u[i - 1], uniform_open01(rng), cfg.delta);
  return u;
}

/// Dependent sample with marginal `dist`: quantile transform of the chain.
template <class URBG>
std::vector<double> sample(const DistributionSpec& dist, std::size_t n, double delta, URBG& rng) {
  std::vector<double> x = simulate_chain(n, delta, rng);
  for (double& v : x) v = quantile(dist, v);
  return x;
}

// ---------------------------------------------------------------------------
// Diagnostics

/// Average ranks (1-based); ties share the mean of their positions.
inline std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Spearman rank correlation of the pairs (u_i, u_{i+lag}).
inline double spearman_lag(std::span<const double> u, std::size_t lag) {
  if (u.size() <= lag + 2) throw InsufficientData("spearman_lag: sequence too short for lag");
  const std::size_t m = u.size() - lag;
  const auto rx = average_ranks(u.first(m));
  const auto ry = average_ranks(u.subspan(lag, m));
  return pearson(rx, ry);
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `u` and
/// Uniform(0,1).
inline double ks_distance_uniform(std::span<const double> u) {
  if (u.empty()) throw EmptyInput("ks_distance_uniform: empty input");
  std::vector<double> s(u.begin(), u.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = std::clamp(s[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic one-sample KS critical value at the 1% level.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace bootci
