#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <boost/math/special_functions/beta.hpp>

#include "bootci/errors.hpp"

namespace bootci {

enum class Family { exponential, normal, laplace, uniform, student_t };

inline constexpr std::array<Family, 5> kAllFamilies = {
    Family::exponential, Family::normal, Family::laplace, Family::uniform, Family::student_t};

inline constexpr std::string_view to_token(Family f) {
  switch (f) {
    case Family::exponential: return "exponential";
    case Family::normal: return "normal";
    case Family::laplace: return "laplace";
    case Family::uniform: return "uniform";
    case Family::student_t: return "student_t";
  }
  return "";
}

inline std::optional<Family> family_from_token(std::string_view token) {
  for (Family f : kAllFamilies)
    if (to_token(f) == token) return f;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Standard normal

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Inverse of the standard normal CDF. Rational approximation (Acklam)
/// followed by one Halley step against erfc, which brings the result to
/// within a few ulps over the whole open unit interval.
inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_quantile: p must lie in (0,1)");

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley refinement. The residual is taken on the smaller tail so that
  // upper-tail p keeps its precision.
  const double e = (p < 0.5) ? std_normal_cdf(x) - p : (1.0 - p) - 0.5 * std::erfc(x / std::numbers::sqrt2);
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

// ---------------------------------------------------------------------------
// Standard Student-t (location 0, scale 1)

inline double student_t_cdf_std(double t, double dof) {
  const double x = dof / (dof + t * t);
  const double tail = 0.5 * boost::math::ibeta(0.5 * dof, 0.5, x);
  return t < 0.0 ? tail : 1.0 - tail;
}

inline double student_t_pdf_std(double t, double dof) {
  const double log_norm = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                          0.5 * std::log(dof * std::numbers::pi);
  return std::exp(log_norm - 0.5 * (dof + 1.0) * std::log1p(t * t / dof));
}

/// Numerical inversion of the Student-t CDF: bracket, then Newton steps
/// guarded by bisection, to 1e-10 in t.
inline double student_t_quantile_std(double p, double dof) {
  if (p == 0.5) return 0.0;
  // Solve on the lower tail and reflect; the CDF is symmetric.
  const bool upper = p > 0.5;
  const double target = upper ? 1.0 - p : p;

  double hi = 0.0;
  double lo = -1.0;
  while (student_t_cdf_std(lo, dof) > target) {
    hi = lo;
    lo *= 2.0;
    if (lo < -1e300) break;
  }
  double t = std::clamp(std_normal_quantile(target), lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = student_t_cdf_std(t, dof) - target;
    if (f == 0.0) break;
    if (f > 0.0) hi = t; else lo = t;
    double next = t - f / student_t_pdf_std(t, dof);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool done = std::fabs(next - t) <= 1e-12 * std::max(1.0, std::fabs(t));
    t = next;
    if (done || hi - lo <= 1e-14 * std::max(1.0, std::fabs(t))) break;
  }
  return upper ? -t : t;
}

// ---------------------------------------------------------------------------
// Calibrated marginal families

struct ExponentialParams { double rate; };
struct NormalParams { double location, scale; };
struct LaplaceParams { double location, scale; };
struct UniformParams { double lower, upper; };
struct StudentTParams { double location, scale, dof; };

using FamilyParams =
    std::variant<ExponentialParams, NormalParams, LaplaceParams, UniformParams, StudentTParams>;

inline constexpr double kDefaultStudentDof = 3.0;

/// A marginal distribution whose parameters were solved so that its mean
/// and standard deviation equal the requested targets.
struct DistributionSpec {
  Family family;
  double target_mean;
  double target_sd;
  FamilyParams params;

  double mean() const {
    return std::visit(
        [](const auto& p) -> double {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, ExponentialParams>) return 1.0 / p.rate;
          else if constexpr (std::is_same_v<P, UniformParams>) return 0.5 * (p.lower + p.upper);
          else return p.location;
        },
        params);
  }

  double sd() const {
    return std::visit(
        [](const auto& p) -> double {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, ExponentialParams>) return 1.0 / p.rate;
          else if constexpr (std::is_same_v<P, NormalParams>) return p.scale;
          else if constexpr (std::is_same_v<P, LaplaceParams>) return p.scale * std::numbers::sqrt2;
          else if constexpr (std::is_same_v<P, UniformParams>) return (p.upper - p.lower) / std::sqrt(12.0);
          else return p.scale * std::sqrt(p.dof / (p.dof - 2.0));
        },
        params);
  }
};

inline DistributionSpec make_distribution(Family family, double target_mean, double target_sd,
                                          double student_dof = kDefaultStudentDof) {
  if (!(target_sd > 0.0) || !std::isfinite(target_sd) || !std::isfinite(target_mean))
    throw InvalidTarget("make_distribution: target sd must be positive and finite");

  DistributionSpec spec{family, target_mean, target_sd, ExponentialParams{1.0}};
  switch (family) {
    case Family::exponential:
      // The exponential family forces mean == sd.
      if (std::fabs(target_mean - target_sd) > 1e-12 * std::fabs(target_sd))
        throw UnreachableMoments("make_distribution: exponential requires mean == sd");
      spec.params = ExponentialParams{1.0 / target_mean};
      break;
    case Family::normal:
      spec.params = NormalParams{target_mean, target_sd};
      break;
    case Family::laplace:
      spec.params = LaplaceParams{target_mean, target_sd / std::numbers::sqrt2};
      break;
    case Family::uniform: {
      const double half = target_sd * std::sqrt(3.0);
      spec.params = UniformParams{target_mean - half, target_mean + half};
      break;
    }
    case Family::student_t:
      if (!(student_dof > 2.0))
        throw UnreachableMoments("make_distribution: student_t needs dof > 2 for a finite sd");
      spec.params = StudentTParams{target_mean, target_sd * std::sqrt((student_dof - 2.0) / student_dof),
                                   student_dof};
      break;
  }
  return spec;
}

inline double quantile(const DistributionSpec& dist, double p) {
  if (dist.family == Family::uniform) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile: p must lie in [0,1]");
  } else if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile: p must lie in (0,1) for unbounded families");
  }
  return std::visit(
      [p](const auto& q) -> double {
        using P = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<P, ExponentialParams>) {
          return -std::log1p(-p) / q.rate;
        } else if constexpr (std::is_same_v<P, NormalParams>) {
          return q.location + q.scale * std_normal_quantile(p);
        } else if constexpr (std::is_same_v<P, LaplaceParams>) {
          return p < 0.5 ? q.location + q.scale * std::log(2.0 * p)
                         : q.location - q.scale * std::log(2.0 * (1.0 - p));
        } else if constexpr (std::is_same_v<P, UniformParams>) {
          return q.lower + p * (q.upper - q.lower);
        } else {
          return q.location + q.scale * student_t_quantile_std(p, q.dof);
        }
      },
      dist.params);
}

inline double cdf(const DistributionSpec& dist, double x) {
  return std::visit(
      [x](const auto& q) -> double {
        using P = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<P, ExponentialParams>) {
          return x <= 0.0 ? 0.0 : -std::expm1(-q.rate * x);
        } else if constexpr (std::is_same_v<P, NormalParams>) {
          return std_normal_cdf((x - q.location) / q.scale);
        } else if constexpr (std::is_same_v<P, LaplaceParams>) {
          const double z = (x - q.location) / q.scale;
          return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
        } else if constexpr (std::is_same_v<P, UniformParams>) {
          return std::clamp((x - q.lower) / (q.upper - q.lower), 0.0, 1.0);
        } else {
          return student_t_cdf_std((x - q.location) / q.scale, q.dof);
        }
      },
      dist.params);
}

}  // namespace bootci
