#include "adhoccap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "adhoccap/errors.hpp"
#include "adhoccap/numerics.hpp"
#include "support/oracles.hpp"

namespace adhoccap::geometry {
namespace {

const Arena kArena{6.0, 0.1, 3.5};

TEST(Arena, DerivedConstants) {
  EXPECT_DOUBLE_EQ(kArena.c(), 3.5 * 3.5 * 0.01 / 144.0);
  EXPECT_NEAR(kArena.c(), 8.5069444444e-4, 1e-13);
  EXPECT_DOUBLE_EQ(kArena.d_min(), 0.1);
  EXPECT_DOUBLE_EQ(kArena.d_max(), std::numbers::sqrt2 * 6.0);
  EXPECT_DOUBLE_EQ(kArena.delta_min(), 1.0);
  EXPECT_DOUBLE_EQ(kArena.sigma(), 6.0 / 3.5);
}

TEST(Arena, UpperSupportIdentityHoldsForEveryArena) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> side(0.5, 100.0);
  std::uniform_real_distribution<double> wave(0.01, 0.3);
  std::uniform_real_distribution<double> shape(1.0, 6.0);
  for (int i = 0; i < 200; ++i) {
    const Arena arena(side(rng), wave(rng), shape(rng));
    const double k = arena.shape();
    EXPECT_EQ(arena.upper_support_arg(), k * k / 2.0);
    const double delta_max = arena.delta_max();
    EXPECT_NEAR(delta_max * delta_max * arena.c() / (k * k / 2.0), 1.0, 1e-14);
  }
}

TEST(Arena, RejectsInvalidGeometry) {
  EXPECT_THROW(Arena(0.0, 0.1), DomainError);
  EXPECT_THROW(Arena(6.0, -0.1), DomainError);
  EXPECT_THROW(Arena(6.0, 0.1, 0.0), DomainError);
  EXPECT_THROW(Arena(0.05, 0.1), DomainError);  // lambda beyond the diagonal
}

TEST(NearField, ZoneBoundaries) {
  const auto half = near_field_boundary({0.05, 1.0, 1.0}, kArena);
  EXPECT_DOUBLE_EQ(half.near_field, 0.05);  // lambda / 2
  EXPECT_DOUBLE_EQ(half.free_space_end, 40.0);
  const auto full = near_field_boundary({0.1, 1.0, 1.0}, kArena);
  EXPECT_DOUBLE_EQ(full.near_field, 0.2);  // 2 lambda
  EXPECT_THROW(near_field_boundary({0.0, 1.0, 1.0}, kArena), DomainError);
}

TEST(LinkGain, FreeSpaceLaw) {
  EXPECT_DOUBLE_EQ(gain_from_distance(kArena, 0.1).gain, 1.0);
  EXPECT_TRUE(gain_from_distance(kArena, 0.1).receivable);
  EXPECT_DOUBLE_EQ(gain_from_distance(kArena, 0.2).gain, 0.25);
  EXPECT_NEAR(gain_from_distance(kArena, kArena.d_max()).gain, 0.01 / 72.0, 1e-18);
  EXPECT_FALSE(gain_from_distance(kArena, 0.05).receivable);
  EXPECT_THROW(gain_from_distance(kArena, 0.0), DomainError);
}

TEST(DistanceCdf, EndpointsAndMedian) {
  for (auto model : {DistanceModel::ExactUniformSquare, DistanceModel::GaussianApprox}) {
    EXPECT_EQ(distance_cdf(kArena, model, 0.0), 0.0);
  }
  EXPECT_EQ(distance_cdf(kArena, DistanceModel::ExactUniformSquare, kArena.d_max()), 1.0);
  EXPECT_EQ(distance_cdf(kArena, DistanceModel::ExactUniformSquare, 100.0), 1.0);
  const double median = 2.0 * 6.0 / 3.5 * std::sqrt(std::numbers::ln2);
  EXPECT_NEAR(distance_cdf(kArena, DistanceModel::GaussianApprox, median), 0.5, 1e-15);
}

TEST(DistanceCdf, ExactModelContinuousAtBranchPoints) {
  const double b = kArena.side();
  for (const double x : {1.0, std::numbers::sqrt2}) {
    const double below = distance_cdf(kArena, DistanceModel::ExactUniformSquare, b * (x - 1e-10));
    const double above = distance_cdf(kArena, DistanceModel::ExactUniformSquare, b * (x + 1e-10));
    EXPECT_NEAR(below, above, 1e-9) << "x = " << x;
  }
}

TEST(DistanceCdf, ExactModelMatchesUniformSampling) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  const int samples = 400000;
  const std::vector<double> probes = {1.0, 3.0, 6.0, 7.5};
  std::vector<int> hits(probes.size(), 0);
  for (int s = 0; s < samples; ++s) {
    const double d = std::hypot(u(rng) - u(rng), u(rng) - u(rng));
    for (std::size_t p = 0; p < probes.size(); ++p) hits[p] += d <= probes[p];
  }
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const double expected = distance_cdf(kArena, DistanceModel::ExactUniformSquare, probes[p]);
    const double stderr_ = std::sqrt(expected * (1 - expected) / samples);
    EXPECT_NEAR(static_cast<double>(hits[p]) / samples, expected, 4 * stderr_ + 1e-9);
  }
}

TEST(DistanceCdf, BothModelsMonotoneAndCloseWithPinnedGap) {
  const int points = 10000;
  double gap = 0.0;
  double prev_exact = 0.0;
  double prev_gauss = 0.0;
  for (int i = 0; i < points; ++i) {
    const double d = i * kArena.d_max() / (points - 1);
    const double exact = distance_cdf(kArena, DistanceModel::ExactUniformSquare, d);
    const double gauss = distance_cdf(kArena, DistanceModel::GaussianApprox, d);
    EXPECT_GE(exact, prev_exact - 1e-15);
    EXPECT_GE(gauss, prev_gauss);
    prev_exact = exact;
    prev_gauss = gauss;
    gap = std::max(gap, std::abs(exact - gauss));
  }
  // Regression constant from an independent evaluation of both closed forms.
  EXPECT_NEAR(gap, 0.05204560104892075, 1e-9);
}

TEST(GainLaw, CdfLimitsAndTailProbabilities) {
  EXPECT_NEAR(gain_cdf(kArena, 1e12), 1.0, 1e-14);
  // Gaussian model: P(d <= d_min) = 1 - F_H(1), P(d >= d_max) = F_H(1/delta_max^2).
  EXPECT_NEAR(1.0 - gain_cdf(kArena, 1.0), 8.5033e-4, 1e-7);
  EXPECT_NEAR(gain_cdf(kArena, kArena.min_gain()), 0.0022, 5e-5);
  EXPECT_THROW(gain_cdf(kArena, 0.0), DomainError);
  EXPECT_THROW(gain_pdf(kArena, -1.0), DomainError);
}

TEST(GainLaw, PdfIsDerivativeOfCdf) {
  for (const double h : {2e-4, 5e-4, 1e-3, 1e-2, 0.3}) {
    const double step = 1e-6 * h;
    const double slope = (gain_cdf(kArena, h + step) - gain_cdf(kArena, h - step)) / (2 * step);
    EXPECT_NEAR(gain_pdf(kArena, h), slope, 1e-6 * std::max(1.0, slope)) << "h = " << h;
  }
}

TEST(GainLaw, PdfIntegratesToCdfDifferenceOverSupport) {
  const double lo = kArena.min_gain();
  const double hi = kArena.max_gain();
  // Substitute h = lo + (hi - lo) t onto the unit interval.
  const double mass = numerics::integrate_unit(
      [&](double t) { return (hi - lo) * gain_pdf(kArena, lo + (hi - lo) * t); });
  EXPECT_NEAR(mass, gain_cdf(kArena, hi) - gain_cdf(kArena, lo), 1e-10);
}

TEST(MeanGain, MatchesDirectIntegralAndFrozenValue) {
  EXPECT_NEAR(mean_gain(kArena), 0.005523372189636786773, 1e-15);
  EXPECT_NEAR(mean_gain(kArena) / oracle::mean_gain_quadrature({}), 1.0, 1e-10);
}

TEST(MeanGain, DegenerateSupportGivesZero) {
  // delta_max -> delta_min as lambda approaches the diagonal.
  const Arena narrow(1.0, std::numbers::sqrt2 * (1.0 - 1e-12), 3.5);
  EXPECT_NEAR(mean_gain(narrow), 0.0, 1e-9);
}

TEST(MeanGain, MonteCarloTruncatedGaussianDistances) {
  // Gaussian-model distances have F_d(y) = 1 - exp(-y^2 / (4 sigma^2)); invert it
  // and keep samples inside [d_min, d_max].
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double scale = 2.0 * kArena.side() / kArena.shape();
  double sum = 0.0;
  const int samples = 10'000'000;
  for (int s = 0; s < samples; ++s) {
    const double d = scale * std::sqrt(-std::log1p(-u(rng)));
    if (d >= kArena.d_min() && d <= kArena.d_max()) sum += 0.01 / (d * d);
  }
  EXPECT_NEAR(sum / samples / mean_gain(kArena), 1.0, 0.01);
}

TEST(CondMeanGain, MatchesDefiningIntegral) {
  const double value = cond_mean_gain(kArena, 5.0, 9.143e-4);
  EXPECT_NEAR(value, 1.539867604946044e-4, 1e-15);
  for (const double own : {1e-5, 1e-4, 9.143e-4, 1e-2, 0.5}) {
    for (const double gamma : {0.5, 5.0, 20.0}) {
      EXPECT_NEAR(cond_mean_gain(kArena, gamma, own) /
                      oracle::cond_mean_gain_quadrature({}, gamma, own),
                  1.0, 1e-9)
          << "own = " << own << " gamma = " << gamma;
    }
  }
}

TEST(CondMeanGain, LimitsCollapseToMeanGain) {
  const double mean = mean_gain(kArena);
  EXPECT_NEAR(cond_mean_gain(kArena, 0.0, 1e-3), mean, 1e-16);
  EXPECT_NEAR(cond_mean_gain(kArena, 1e-12, 1e-3), mean, 1e-12);
  EXPECT_NEAR(cond_mean_gain(kArena, 5.0, 1e9), mean, 1e-10);
  EXPECT_DOUBLE_EQ(cond_mean_gain(kArena, 5.0, std::numeric_limits<double>::infinity()), mean);
}

TEST(CondMeanGain, DecreasingInGammaIncreasingInOwnGain) {
  for (double own = 1e-5; own < 1.0; own *= 3.0) {
    double previous = std::numeric_limits<double>::infinity();
    for (double gamma = 0.25; gamma < 50.0; gamma *= 1.5) {
      const double value = cond_mean_gain(kArena, gamma, own);
      EXPECT_LT(value, previous);
      previous = value;
    }
  }
  double previous = 0.0;
  for (double own = 1e-6; own < 10.0; own *= 1.8) {
    const double value = cond_mean_gain(kArena, 5.0, own);
    EXPECT_GT(value, previous);
    previous = value;
  }
}

TEST(CondMeanGain, RatioIsStableForTinyGains) {
  const double own = 1e-150;
  const double ratio = cond_mean_gain_ratio(kArena, 5.0, own);
  // h -> 0: E[H|h]/h -> (e^{-C} - e^{-k^2/2}) / gamma.
  const double limit = (std::exp(-kArena.c()) - std::exp(-6.125)) / 5.0;
  EXPECT_NEAR(ratio, limit, 1e-12);
  EXPECT_NEAR(cond_mean_gain_ratio(kArena, 5.0, 1e-3) * 1e-3,
              cond_mean_gain(kArena, 5.0, 1e-3), 1e-18);
}

TEST(AsyncCondMeanGain, FrozenValueAndPositivity) {
  const double value = async_cond_mean_gain(kArena, 5.0, 1e-3);
  EXPECT_NEAR(value, 2.689648247337055e-4, 1e-13);
  EXPECT_GT(value, 0.0);
  EXPECT_TRUE(std::isfinite(value));
}

TEST(AsyncCondMeanGain, MonteCarloOverDelay) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int samples = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double tau = u(rng);
    const double v = tau * oracle::cond_mean_gain_quadrature({}, 5.0, 1e-3 / tau) +
                     (1 - tau) * oracle::cond_mean_gain_quadrature({}, 5.0, 1e-3 / (1 - tau));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / samples;
  const double sem = std::sqrt((sum_sq / samples - mean * mean) / samples);
  EXPECT_NEAR(async_cond_mean_gain(kArena, 5.0, 1e-3), mean, 4 * sem);
}

TEST(AsyncCondMeanGain, ZeroTargetGivesMeanGain) {
  EXPECT_NEAR(async_cond_mean_gain(kArena, 0.0, 1e-3) / mean_gain(kArena), 1.0, 1e-10);
}

TEST(AsyncCondMeanGain, SymmetricHalvesAgree) {
  const double own = 2e-3;
  const double gamma = 5.0;
  const double half = numerics::integrate_unit(
      [&](double t) { return t > 0 ? t * cond_mean_gain(kArena, gamma, own / t) : 0.0; });
  EXPECT_NEAR(async_cond_mean_gain(kArena, gamma, own) / (2.0 * half), 1.0, 1e-10);
}

TEST(AsyncCondMeanGain, CustomDelayDensityHook) {
  // A narrow bump at tau = 1/2 approaches tau E[H|2h] twice.
  const double own = 1e-3;
  auto peaked = [](double tau) {
    const double w = 0.005;
    const double z = (tau - 0.5) / w;
    return std::exp(-0.5 * z * z) / (w * std::sqrt(2.0 * std::numbers::pi));
  };
  const double value = async_cond_mean_gain(kArena, 5.0, own, peaked);
  EXPECT_NEAR(value / cond_mean_gain(kArena, 5.0, 2 * own), 1.0, 1e-3);
  EXPECT_NEAR(async_cond_mean_gain_ratio(kArena, 5.0, own, peaked) * own, value, 1e-12);
}

TEST(ThresholdProbability, MutualInverses) {
  // Below ~C/7 the probability sits too close to 1 for a 1e-12 round trip.
  for (double t = 2e-4; t < 10.0; t *= 1.3) {
    EXPECT_NEAR(threshold_from_prob(kArena, prob_from_threshold(kArena, t)) / t, 1.0, 1e-12);
  }
  EXPECT_NEAR(threshold_from_prob(kArena, 1.0 - std::exp(-1.0)), kArena.c(), 1e-18);
  EXPECT_NEAR(prob_from_threshold(kArena, 5.6638e-4), 0.7773, 5e-5);
  EXPECT_LT(prob_from_threshold(kArena, 1e6), 1e-8);
  EXPECT_GT(threshold_from_prob(kArena, 1e-12), 1e8);
}

TEST(ThresholdProbability, RejectsProbabilitiesOutsideOpenInterval) {
  EXPECT_THROW(threshold_from_prob(kArena, 0.0), DomainError);
  EXPECT_THROW(threshold_from_prob(kArena, 1.0), DomainError);
  EXPECT_THROW(prob_from_threshold(kArena, 0.0), DomainError);
}

TEST(RangeProbability, DiagonalHalfAndLimits) {
  EXPECT_NEAR(prob_from_range(kArena, std::numbers::sqrt2 * 6.0 / 2.0),
              1.0 - std::exp(-3.5 * 3.5 / 8.0), 1e-15);
  EXPECT_NEAR(prob_from_range(kArena, std::numbers::sqrt2 * 3.0), 0.784, 5e-4);
  EXPECT_LT(prob_from_range(kArena, 1e-9), 1e-17);
  EXPECT_DOUBLE_EQ(prob_from_range(kArena, 1e3), 1.0);
}

}  // namespace
}  // namespace adhoccap::geometry
