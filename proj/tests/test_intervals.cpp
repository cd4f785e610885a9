#include "bootci/intervals.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bootci/copula.hpp"

namespace bootci {
namespace {

std::vector<double> normal_data(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(5.0, 5.0);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

// Brute-force order-statistic quantile: h = (m-1)p on the sorted copy.
double sorted_oracle(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double h = (v.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - lo) * (v[lo + 1] - v[lo]);
}

TEST(NormalInterval, ConstantDataGivesZeroLength) {
  std::mt19937_64 rng(1);
  const std::vector<double> x(15, 4.0);
  const auto ci = normal_interval(x, Statistic{StatKind::mean}, 100, 0.95, rng);
  EXPECT_EQ(ci.lower, 4.0);
  EXPECT_EQ(ci.upper, 4.0);
  EXPECT_EQ(ci.method, Method::normal);
}

TEST(NormalInterval, SymmetricAboutEstimate) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = normal_data(rng, 10 + trial);
    for (StatKind k : {StatKind::mean, StatKind::sd}) {
      const auto ci = normal_interval(x, Statistic{k}, 100, 0.9, rng);
      EXPECT_NEAR(ci.upper - ci.estimate, ci.estimate - ci.lower, 1e-12);
      EXPECT_NEAR(0.5 * (ci.lower + ci.upper), ci.estimate, 1e-12);
    }
  }
}

TEST(NormalInterval, UnitSeAtNinetyFive) {
  const auto ci = normal_from_se(0.0, 1.0, 0.95);
  EXPECT_NEAR(ci.lower, -1.959964, 1e-6);
  EXPECT_NEAR(ci.upper, 1.959964, 1e-6);
}

TEST(PercentileInterval, InterpolatedOrderStatistics) {
  std::vector<double> reps(100);
  for (int i = 0; i < 100; ++i) reps[i] = 100 - i;  // unsorted on purpose
  const auto ci = percentile_from_replicates(reps, 0.8);
  EXPECT_DOUBLE_EQ(ci.lower, 10.9);
  EXPECT_DOUBLE_EQ(ci.upper, 90.1);
}

TEST(PercentileInterval, ConstantReplicates) {
  const auto ci = percentile_from_replicates(std::vector<double>(30, 2.0), 0.95);
  EXPECT_EQ(ci.lower, 2.0);
  EXPECT_EQ(ci.upper, 2.0);
}

TEST(PercentileInterval, MatchesSortOracleAndStaysInRange) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto reps = normal_data(rng, 2 + trial);
    for (double level : {0.5, 0.8, 0.95, 0.99}) {
      const auto ci = percentile_from_replicates(reps, level);
      const double a = 1 - level;
      EXPECT_EQ(ci.lower, sorted_oracle(reps, a / 2));
      EXPECT_EQ(ci.upper, sorted_oracle(reps, 1 - a / 2));
      EXPECT_GE(ci.lower, *std::min_element(reps.begin(), reps.end()));
      EXPECT_LE(ci.upper, *std::max_element(reps.begin(), reps.end()));
    }
  }
}

TEST(StudentizedInterval, UpperPivotBuildsLowerEndpoint) {
  // Sorted pivots (-1, 0, 1, 4, 10): the 0.25 and 0.75 quantiles are 0 and 4.
  const std::vector<double> pivots{4.0, -1.0, 10.0, 0.0, 1.0};
  const auto ci = studentized_from_pivots(10.0, 2.0, pivots, 0.5);
  EXPECT_DOUBLE_EQ(ci.lower, 10.0 - 4.0 * 2.0);
  EXPECT_DOUBLE_EQ(ci.upper, 10.0 - 0.0 * 2.0);
}

TEST(StudentizedInterval, SymmetricPivotsGiveSymmetricInterval) {
  const auto ci = studentized_from_pivots(0.0, 1.0, std::vector<double>{-3, -1, 1, 3}, 0.9);
  EXPECT_NEAR(ci.lower, -ci.upper, 1e-12);
}

TEST(StudentizedInterval, LowerNotAboveUpper) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = normal_data(rng, 10);
    for (StatKind k : {StatKind::mean, StatKind::sd}) {
      const auto ci = studentized_interval(x, Statistic{k}, 50, 30, 0.95, rng);
      EXPECT_LE(ci.lower, ci.upper);
      EXPECT_TRUE(std::isfinite(ci.lower) && std::isfinite(ci.upper));
    }
  }
}

TEST(StudentizedInterval, DegenerateInnerBootstrap) {
  std::mt19937_64 rng(5);
  EXPECT_THROW(studentized_interval(std::vector<double>(10, 1.0), Statistic{}, 20, 20, 0.95, rng),
               DegenerateReplicates);
  EXPECT_THROW(studentized_from_pivots(0, 1, std::vector<double>{1.0}, 0.95), DegenerateReplicates);
}

TEST(StudentizedInterval, DroppedPivotsAreCounted) {
  // Two-point data: an inner bootstrap of a constant resample has SE 0.
  std::mt19937_64 rng(6);
  const auto ci = studentized_interval(std::vector<double>{0.0, 1.0}, Statistic{}, 200, 10, 0.9, rng);
  EXPECT_GT(ci.meta.dropped_pivots, 50u);
  EXPECT_LT(ci.meta.dropped_pivots, 150u);
}

TEST(BcaInterval, NoCorrectionEqualsPercentile) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto reps = normal_data(rng, 100);
    for (double level : {0.8, 0.95, 0.99}) {
      const auto bca = bca_from_replicates(reps, 0.0, 0.0, level);
      const auto pct = percentile_from_replicates(reps, level);
      EXPECT_EQ(bca.lower, pct.lower);
      EXPECT_EQ(bca.upper, pct.upper);
    }
  }
}

TEST(BcaInterval, LevelsWithoutCorrection) {
  const auto [a1, a2] = bca_levels(0.0, 0.0, 0.9);
  EXPECT_NEAR(a1, 0.05, 1e-15);
  EXPECT_NEAR(a2, 0.95, 1e-15);
}

TEST(BcaInterval, BiasCorrectionAtHalf) {
  const std::vector<double> reps{1, 2, 3, 4, 6, 7, 8, 9};
  EXPECT_EQ(bca_bias_correction(reps, 5.0), 0.0);
}

TEST(BcaInterval, BiasCorrectionIsClampedAndStrict) {
  const std::vector<double> reps{5, 5, 6, 7};
  bool clamped = false;
  // Ties do not count as below: proportion 0 is clamped to 1/(2B).
  EXPECT_NEAR(bca_bias_correction(reps, 5.0, &clamped), std_normal_quantile(1.0 / 8.0), 1e-15);
  EXPECT_TRUE(clamped);
  EXPECT_NEAR(bca_bias_correction(reps, 100.0, &clamped), std_normal_quantile(7.0 / 8.0), 1e-15);
  EXPECT_TRUE(clamped);
  bca_bias_correction(reps, 6.0, &clamped);
  EXPECT_FALSE(clamped);
}

TEST(BcaInterval, AccelerationFromJackknife) {
  EXPECT_EQ(bca_acceleration(std::vector<double>{2.5, 2.0, 1.5}), 0.0);
  EXPECT_EQ(bca_acceleration(std::vector<double>{3.0, 3.0, 3.0}), 0.0);
  // (0, 0, 3): d = (1, 1, -2), sum d^3 = -6, sum d^2 = 6.
  EXPECT_NEAR(bca_acceleration(std::vector<double>{0.0, 0.0, 3.0}), -6.0 / (6.0 * std::pow(6.0, 1.5)), 1e-15);
}

TEST(BcaInterval, AccelerationOverflowIsReported) {
  EXPECT_THROW(bca_levels(0.0, 1.0, 0.95), AccelerationOverflow);
  EXPECT_THROW(bca_levels(0.0, -1.0, 0.95), AccelerationOverflow);
  EXPECT_NO_THROW(bca_levels(0.0, 0.1, 0.95));
}

TEST(BcaInterval, ClampFlagInMeta) {
  std::mt19937_64 rng(8);
  // Continuous data: about half the replicates fall below the estimate.
  const auto x = normal_data(rng, 20);
  const auto ci = bca_interval(x, Statistic{StatKind::mean}, 100, 0.95, rng);
  EXPECT_LE(ci.lower, ci.upper);
  EXPECT_FALSE(ci.meta.z0_clamped);
}

TEST(BayesianInterval, ConstantData) {
  std::mt19937_64 rng(9);
  const std::vector<double> x(8, 6.5);
  const auto m = bayesian_interval(x, Statistic{StatKind::mean}, 100, 0.95, rng);
  EXPECT_NEAR(m.lower, 6.5, 1e-13);
  EXPECT_NEAR(m.upper, 6.5, 1e-13);
  const auto s = bayesian_interval(x, Statistic{StatKind::sd}, 100, 0.95, rng);
  EXPECT_NEAR(s.lower, 0.0, 1e-13);
  EXPECT_NEAR(s.upper, 0.0, 1e-13);
}

TEST(BayesianInterval, SingleObservation) {
  std::mt19937_64 rng(10);
  const auto ci = bayesian_interval(std::vector<double>{3.0}, Statistic{StatKind::mean}, 50, 0.9, rng);
  EXPECT_EQ(ci.lower, 3.0);
  EXPECT_EQ(ci.upper, 3.0);
  EXPECT_THROW(bayesian_interval(std::vector<double>{}, Statistic{}, 50, 0.9, rng), EmptyInput);
}

TEST(Intervals, LevelValidation) {
  std::mt19937_64 rng(11);
  const std::vector<double> x{1, 2, 3};
  for (Method m : kAllMethods) {
    EXPECT_THROW(compute_interval(m, x, Statistic{}, 10, 10, 1.0, rng), DomainError) << to_token(m);
    EXPECT_THROW(compute_interval(m, x, Statistic{}, 10, 10, 0.0, rng), DomainError) << to_token(m);
  }
}

TEST(Intervals, NestedInLevel) {
  std::mt19937_64 data_rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = normal_data(data_rng, 20);
    for (Method m : {Method::percentile, Method::bayesian, Method::studentized}) {
      for (StatKind k : {StatKind::mean, StatKind::sd}) {
        std::mt19937_64 a(100 + trial), b(100 + trial);
        const auto wide = compute_interval(m, x, Statistic{k}, 100, 30, 0.99, a);
        const auto narrow = compute_interval(m, x, Statistic{k}, 100, 30, 0.8, b);
        EXPECT_LE(wide.lower, narrow.lower) << to_token(m);
        EXPECT_GE(wide.upper, narrow.upper) << to_token(m);
      }
    }
  }
}

TEST(Intervals, TranslationAndScaleEquivariance) {
  std::mt19937_64 data_rng(13);
  const auto x = normal_data(data_rng, 25);
  for (Method m : kAllMethods) {
    std::mt19937_64 base_rng(7);
    const auto base = compute_interval(m, x, Statistic{}, 100, 40, 0.95, base_rng);

    std::vector<double> shifted(x), scaled(x);
    for (double& v : shifted) v += 100.0;
    for (double& v : scaled) v *= 3.0;
    std::mt19937_64 r1(7), r2(7);
    const auto s = compute_interval(m, shifted, Statistic{}, 100, 40, 0.95, r1);
    const auto k = compute_interval(m, scaled, Statistic{}, 100, 40, 0.95, r2);
    EXPECT_NEAR(s.lower, base.lower + 100.0, 1e-9) << to_token(m);
    EXPECT_NEAR(s.upper, base.upper + 100.0, 1e-9) << to_token(m);
    EXPECT_NEAR(k.lower, 3.0 * base.lower, 1e-9) << to_token(m);
    EXPECT_NEAR(k.upper, 3.0 * base.upper, 1e-9) << to_token(m);
  }
}

TEST(Intervals, MethodTokens) {
  for (Method m : kAllMethods) EXPECT_EQ(method_from_token(to_token(m)), m);
  EXPECT_FALSE(method_from_token("abc").has_value());
}

// Monte Carlo coverage oracle: iid Normal(5, 5), n = 100, mean, 95%.
double coverage_over_runs(Method m, int runs) {
  std::mt19937_64 rng(2025 + static_cast<int>(m));
  int hits = 0;
  for (int r = 0; r < runs; ++r) {
    const auto x = normal_data(rng, 100);
    const auto ci = compute_interval(m, x, Statistic{StatKind::mean}, 100, 100, 0.95, rng);
    hits += ci.contains(5.0);
  }
  return hits / double(runs);
}

TEST(Coverage, StudentizedNormalMean) {
  const double c = coverage_over_runs(Method::studentized, 1000);
  EXPECT_GE(c, 0.91);
  EXPECT_LE(c, 0.985);
}

TEST(Coverage, BayesianNormalMean) {
  const double c = coverage_over_runs(Method::bayesian, 1000);
  EXPECT_GE(c, 0.90);
  EXPECT_LE(c, 0.98);
}

}  // namespace
}  // namespace bootci
