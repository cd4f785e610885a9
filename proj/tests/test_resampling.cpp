#include "bootci/resampling.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "bootci/copula.hpp"

namespace bootci {
namespace {

// Two-pass sd in long double, independent of the library path.
double sd_oracle(const std::vector<double>& v, long double denom) {
  long double m = 0;
  for (double x : v) m += x;
  m /= v.size();
  long double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return static_cast<double>(std::sqrt(ss / denom));
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale = 10.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

TEST(Resample, LengthOneRepeats) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(resample(std::vector<double>{4.5}, rng), std::vector<double>{4.5});
}

TEST(Resample, LengthPreserved) {
  std::mt19937_64 rng(2);
  for (std::size_t n : {1u, 2u, 7u, 100u}) EXPECT_EQ(resample(std::vector<double>(n, 1.0), rng).size(), n);
  EXPECT_THROW(resample(std::vector<double>{}, rng), EmptyInput);
}

TEST(Resample, OrderedOutcomesOfTwoPoints) {
  std::mt19937_64 rng(3);
  const std::vector<double> x{1.0, 2.0};
  std::map<std::vector<double>, int> freq;
  constexpr int kDraws = 10'000;
  for (int i = 0; i < kDraws; ++i) ++freq[resample(x, rng)];
  ASSERT_EQ(freq.size(), 4u);
  for (const auto& [outcome, count] : freq) EXPECT_NEAR(count / double(kDraws), 0.25, 0.02);
}

TEST(BootstrapReplicates, ConstantData) {
  std::mt19937_64 rng(4);
  const std::vector<double> x(12, 3.25);
  const auto m = bootstrap_replicates(x, Statistic{StatKind::mean}, 50, rng);
  EXPECT_EQ(m.origin_estimate, 3.25);
  for (double v : m.values) EXPECT_EQ(v, 3.25);
  const auto s = bootstrap_replicates(x, Statistic{StatKind::sd}, 50, rng);
  for (double v : s.values) EXPECT_EQ(v, 0.0);
}

TEST(BootstrapReplicates, TwoPointMeanEnumeration) {
  std::mt19937_64 rng(5);
  const std::vector<double> x{0.0, 10.0};
  constexpr std::size_t B = 20'000;
  const auto reps = bootstrap_replicates(x, Statistic{StatKind::mean}, B, rng);
  ASSERT_EQ(reps.values.size(), B);
  std::map<double, int> freq;
  for (double v : reps.values) ++freq[v];
  ASSERT_EQ(freq.size(), 3u);
  EXPECT_NEAR(freq[0.0] / double(B), 0.25, 0.015);
  EXPECT_NEAR(freq[5.0] / double(B), 0.50, 0.015);
  EXPECT_NEAR(freq[10.0] / double(B), 0.25, 0.015);
}

TEST(BootstrapReplicates, Preconditions) {
  std::mt19937_64 rng(6);
  EXPECT_THROW(bootstrap_replicates(std::vector<double>{}, Statistic{}, 10, rng), EmptyInput);
  EXPECT_THROW(bootstrap_replicates(std::vector<double>{1.0, 2.0}, Statistic{}, 1, rng), InvalidConfig);
  EXPECT_THROW(bootstrap_replicates(std::vector<double>{1.0}, Statistic{}, 10, rng), InsufficientData);
}

TEST(BootstrapSe, Examples) {
  EXPECT_EQ(bootstrap_se(std::vector<double>{2.0, 2.0, 2.0}), 0.0);
  EXPECT_NEAR(bootstrap_se(std::vector<double>{0.0, 2.0}), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(bootstrap_se(std::vector<double>{1.0, 2.0, 3.0}), 1.0, 1e-15);
  EXPECT_THROW(bootstrap_se(std::vector<double>{1.0}), InsufficientData);
}

TEST(BootstrapSe, MatchesTwoPassOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = random_vector(rng, 2 + trial % 150, 1.0 + trial);
    const double oracle = sd_oracle(v, v.size() - 1);
    EXPECT_NEAR(bootstrap_se(v), oracle, 1e-12 * oracle);
  }
}

TEST(Statistic, PluginSdUsesSampleDenominator) {
  std::mt19937_64 rng(8);
  const Statistic sd{StatKind::sd};
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_vector(rng, 2 + trial);
    const double oracle = sd_oracle(v, v.size() - 1);
    EXPECT_NEAR(sd.evaluate(v), oracle, 1e-12 * oracle);
  }
}

TEST(Statistic, ConstantSequence) {
  const std::vector<double> x(9, -1.5);
  EXPECT_EQ(Statistic{StatKind::mean}.evaluate(x), -1.5);
  EXPECT_EQ(Statistic{StatKind::sd}.evaluate(x), 0.0);
  const std::vector<double> w(9, 1.0 / 9.0);
  EXPECT_NEAR(Statistic{StatKind::sd}.evaluate_weighted(x, w), 0.0, 1e-15);
}

TEST(Statistic, CounterTalliesEvaluations) {
  EvaluationCounter c;
  const Statistic s{StatKind::mean, &c};
  std::mt19937_64 rng(9);
  const std::vector<double> x{1.0, 2.0, 4.0};
  bootstrap_replicates(x, s, 25, rng);
  EXPECT_EQ(c.count, 26u);
  jackknife_replicates(x, s);
  EXPECT_EQ(c.count, 29u);
}

TEST(Jackknife, Examples) {
  const Statistic mean{StatKind::mean};
  EXPECT_EQ(jackknife_replicates(std::vector<double>{1, 2, 3}, mean), (std::vector<double>{2.5, 2.0, 1.5}));
  EXPECT_EQ(jackknife_replicates(std::vector<double>{7, 7, 7, 7}, mean), (std::vector<double>(4, 7.0)));
  EXPECT_EQ(jackknife_replicates(std::vector<double>{0, 0, 3}, mean), (std::vector<double>{1.5, 1.5, 0.0}));
  EXPECT_THROW(jackknife_replicates(std::vector<double>{1}, mean), InsufficientData);
}

TEST(DirichletWeights, SingleCoordinate) {
  std::mt19937_64 rng(10);
  EXPECT_EQ(dirichlet_weights(1, rng), std::vector<double>{1.0});
}

TEST(DirichletWeights, NormalizedAndNonnegative) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {2u, 3u, 10u, 100u, 1000u})
    for (int i = 0; i < 50; ++i) {
      const auto w = dirichlet_weights(n, rng);
      ASSERT_EQ(w.size(), n);
      for (double v : w) EXPECT_GE(v, 0.0);
      long double total = 0;
      for (double v : w) total += v;
      EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-12);
    }
}

TEST(DirichletWeights, TwoCoordinateMarginalIsUniform) {
  std::mt19937_64 rng(12);
  constexpr std::size_t kDraws = 100'000;
  std::vector<double> first(kDraws);
  for (double& v : first) v = dirichlet_weights(2, rng)[0];
  EXPECT_LT(ks_distance_uniform(first), ks_critical_1pct(kDraws));
}

TEST(DirichletWeights, CoordinateMeans) {
  std::mt19937_64 rng(13);
  constexpr std::size_t n = 5, kDraws = 100'000;
  std::vector<double> sums(n, 0.0);
  for (std::size_t i = 0; i < kDraws; ++i) {
    const auto w = dirichlet_weights(n, rng);
    for (std::size_t j = 0; j < n; ++j) sums[j] += w[j];
  }
  // Marginal Beta(1, n-1): variance (n-1) / (n^2 (n+1)).
  const double se = std::sqrt((n - 1.0) / (n * n * (n + 1.0)) / kDraws);
  for (double s : sums) EXPECT_NEAR(s / kDraws, 1.0 / n, 3 * se);
}

TEST(WeightedMean, Examples) {
  const std::vector<double> x{0.0, 10.0};
  EXPECT_NEAR(weighted_mean(x, std::vector<double>{0.3, 0.7}), 7.0, 1e-15);
  const std::vector<double> y{3.0, -1.0, 8.0, 2.5};
  EXPECT_EQ(weighted_mean(y, std::vector<double>{0, 0, 1, 0}), 8.0);
  EXPECT_THROW(weighted_mean(y, std::vector<double>{0.5, 0.5}), LengthMismatch);
}

TEST(WeightedMean, EqualWeightsGiveArithmeticMean) {
  std::mt19937_64 rng(14);
  // Power-of-two n: 1/n is exact and scaling commutes with rounding.
  for (std::size_t n : {1u, 2u, 8u, 64u}) {
    const auto x = random_vector(rng, n);
    const std::vector<double> w(n, 1.0 / n);
    EXPECT_EQ(weighted_mean(x, w), sample_mean(x));
  }
  for (std::size_t n : {3u, 10u, 100u}) {
    const auto x = random_vector(rng, n);
    const std::vector<double> w(n, 1.0 / n);
    EXPECT_NEAR(weighted_mean(x, w), sample_mean(x), 1e-13);
  }
}

TEST(WeightedSd, Examples) {
  const std::vector<double> x{0.0, 10.0};
  EXPECT_EQ(weighted_sd(std::vector<double>{4, 4, 4}, std::vector<double>{0.2, 0.3, 0.5}), 0.0);
  EXPECT_NEAR(weighted_sd(x, std::vector<double>{0.5, 0.5}), 5.0, 1e-15);
  EXPECT_NEAR(weighted_sd(x, std::vector<double>{0.3, 0.7}), std::sqrt(21.0), 1e-14);
  EXPECT_NEAR(weighted_sd(x, std::vector<double>{0.3, 0.7}), 4.5826, 1e-4);
  EXPECT_THROW(weighted_sd(x, std::vector<double>{1.0}), LengthMismatch);
}

TEST(WeightedSd, EqualWeightsGivePopulationSd) {
  std::mt19937_64 rng(15);
  for (std::size_t n : {2u, 5u, 10u, 100u}) {
    const auto x = random_vector(rng, n);
    const std::vector<double> w(n, 1.0 / n);
    const double pop = sd_oracle(x, n);
    EXPECT_NEAR(weighted_sd(x, w), pop, 1e-12 * pop);
  }
}

TEST(EmpiricalQuantile, Examples) {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i + 1;
  EXPECT_DOUBLE_EQ(empirical_quantile(v, 0.5), 50.5);
  EXPECT_EQ(empirical_quantile(v, 0.0), 1.0);
  EXPECT_EQ(empirical_quantile(v, 1.0), 100.0);
  EXPECT_DOUBLE_EQ(empirical_quantile(std::vector<double>{20, 10}, 0.25), 12.5);
  EXPECT_THROW(empirical_quantile(std::vector<double>{}, 0.5), EmptyInput);
  EXPECT_THROW(empirical_quantile(v, 1.5), DomainError);
}

TEST(EmpiricalQuantile, MonotoneAndAffineEquivariant) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_vector(rng, 1 + trial % 40);
    double p1 = unit(rng), p2 = unit(rng);
    if (p1 > p2) std::swap(p1, p2);
    EXPECT_LE(empirical_quantile(v, p1), empirical_quantile(v, p2));
    std::vector<double> t(v);
    for (double& x : t) x = 2.5 * x - 3.0;
    EXPECT_NEAR(empirical_quantile(t, p1), 2.5 * empirical_quantile(v, p1) - 3.0, 1e-12 * 100);
  }
}

}  // namespace
}  // namespace bootci
