#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_fields.hpp"
#include "wickflow/besov.hpp"
#include "wickflow/ou.hpp"
#include "wickflow/spectral.hpp"

using namespace wickflow;
using wickflow::testing::random_field;

namespace {

SpectralField cosine_mode(const TorusGrid& g, int k1, int k2, double amplitude = 1.0)
{
  SpectralField u(g);
  u.set_mode(k1, k2, {std::acos(-1.0) * amplitude, 0.0});
  return u;
}

double block_scale(int j, double alpha) { return std::pow(2.0, std::max(j, 0) * alpha); }

}  // namespace

TEST(Profiles, SupportsAndPlateau)
{
  for (double r = 0.0; r <= 0.75; r += 0.05) EXPECT_EQ(chi_profile(r), 1.0);
  for (double r = 4.0 / 3.0; r < 10.0; r += 0.1) EXPECT_EQ(chi_profile(r), 0.0);
  for (double r = 0.0; r <= 0.75; r += 0.05) EXPECT_EQ(theta_profile(r), 0.0);
  for (double r = 8.0 / 3.0; r < 20.0; r += 0.1) EXPECT_EQ(theta_profile(r), 0.0);
  for (double r = 0.8; r < 2.6; r += 0.1) EXPECT_GT(theta_profile(r), 0.0);
  for (double r = 0.0; r < 3.0; r += 0.01) {
    EXPECT_GE(chi_profile(r), 0.0);
    EXPECT_LE(chi_profile(r), 1.0);
  }
}

TEST(DyadicPartition, SumsToOneOnEveryLattice)
{
  for (int K : {2, 3, 4, 8, 16, 32, 64}) {
    const DyadicPartition p{TorusGrid(K)};
    EXPECT_LT(p.sum_to_one_residual(), 1e-12) << K;
  }
}

TEST(DyadicPartition, NonAdjacentBlocksDisjoint)
{
  const DyadicPartition p{TorusGrid(32)};
  for (int i = -1; i <= p.top(); ++i)
    for (int j = i + 2; j <= p.top(); ++j) EXPECT_EQ(p.overlap(i, j), 0.0) << i << " " << j;
  EXPECT_GT(p.overlap(1, 2), 0.0);
}

TEST(DyadicPartition, UsableBlocks)
{
  EXPECT_EQ(DyadicPartition(TorusGrid(16)).J(), 3);
  EXPECT_EQ(DyadicPartition(TorusGrid(32)).J(), 4);
  EXPECT_EQ(DyadicPartition(TorusGrid(4)).J(), 1);
  EXPECT_THROW(DyadicPartition(TorusGrid(1)), ConfigurationError);
  const DyadicPartition p{TorusGrid(8)};
  EXPECT_THROW(p.block(SpectralField(TorusGrid(8)), p.top() + 1), DomainError);
  EXPECT_THROW(p.block(SpectralField(TorusGrid(8)), -2), DomainError);
}

TEST(Blocks, ConstantLivesInLowestBlock)
{
  const TorusGrid g(8);
  const DyadicPartition p(g);
  const SpectralField c = SpectralField::constant(g, 1.7);
  EXPECT_EQ(relative_difference(p.block(c, -1), c), 0.0);
  for (int j = 0; j <= p.top(); ++j) EXPECT_EQ(p.block(c, j).max_abs(), 0.0);
}

TEST(Blocks, PureModeSplitsByProfileWeights)
{
  const TorusGrid g(8);
  const DyadicPartition p(g);
  const SpectralField u = cosine_mode(g, 4, 0);
  double total = 0.0;
  for (int j = -1; j <= p.top(); ++j) {
    const double w = j < 0 ? chi_profile(4.0) : theta_profile(4.0 / std::ldexp(1.0, j));
    EXPECT_NEAR(p.block(u, j)(4, 0).real(), w * u(4, 0).real(), 1e-15);
    total += w;
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
  // |k| = 4 sits in the overlap of blocks 1 and 2 only
  EXPECT_GT(p.weight(1, 4, 0), 0.0);
  EXPECT_GT(p.weight(2, 4, 0), 0.0);
  EXPECT_EQ(p.weight(1, 4, 0) + p.weight(2, 4, 0), 1.0);
}

TEST(Blocks, ReconstructionOnRandomFields)
{
  std::mt19937_64 rng(1);
  for (int K : {4, 16}) {
    const TorusGrid g(K);
    const DyadicPartition p(g);
    const SpectralField u = random_field(g, rng);
    SpectralField sum(g);
    for (const auto& b : p.blocks(u)) sum += b;
    EXPECT_LT(relative_difference(sum, u), 1e-12);
  }
}

TEST(BesovNorm, ConstantHasNormEqualToModulus)
{
  const TorusGrid g(8);
  const SpectralField c = SpectralField::constant(g, -2.5);
  for (double alpha : {-1.0, 0.0, 0.7})
    for (double p : {1.0, 2.0, kInf})
      for (double q : {1.0, 2.0, kInf}) EXPECT_NEAR(besov_norm(c, BesovSpec{alpha, p, q, 0.0}), 2.5, 1e-12);
}

TEST(BesovNorm, CosineAgainstMultiplierOracle)
{
  const TorusGrid g(8);
  const SpectralField u = cosine_mode(g, 4, 0, 0.6);
  // each block is w_j * 0.6 cos(4 x1), whose grid maximum is w_j * 0.6 at x = 0
  double oracle = 0.0;
  const DyadicPartition p(g);
  for (int j = -1; j <= p.top(); ++j) {
    const double w = j < 0 ? chi_profile(4.0) : theta_profile(4.0 / std::ldexp(1.0, j));
    oracle = std::max(oracle, block_scale(j, 1.0) * 0.6 * w);
  }
  EXPECT_NEAR(besov_norm(u, BesovSpec{1.0, kInf, kInf, 0.0}), oracle, 1e-10);
}

TEST(BesovNorm, HomogeneousAndMonotoneInAlpha)
{
  std::mt19937_64 rng(2);
  const TorusGrid g(16);
  const DyadicPartition part(g);
  for (int r = 0; r < 5; ++r) {
    const SpectralField u = random_field(g, rng);
    for (double p : {2.0, kInf}) {
      const BesovSpec s{-0.3, p, 2.0, 0.0};
      EXPECT_NEAR(besov_norm(2.0 * u, s, part), 2.0 * besov_norm(u, s, part), 1e-10 * besov_norm(u, s, part));
      double prev = 0.0;
      for (double a = -1.0; a <= 1.0; a += 0.25) {
        const double n = besov_norm(u, BesovSpec{a, p, kInf, 0.0}, part);
        EXPECT_GE(n, prev);
        prev = n;
      }
    }
  }
}

TEST(BesovNorm, WeightedNormBracketedByWeightRange)
{
  std::mt19937_64 rng(3);
  const TorusGrid g(8);
  const double sigma = 2.5;
  double wmin = 1.0, wmax = 0.0;
  for (int i = 0; i < g.M(); ++i)
    for (int j = 0; j < g.M(); ++j) {
      wmin = std::min(wmin, besov_weight(g, i, j, sigma));
      wmax = std::max(wmax, besov_weight(g, i, j, sigma));
    }
  EXPECT_DOUBLE_EQ(wmax, 1.0);
  const double pi = std::acos(-1.0);
  EXPECT_NEAR(wmin, std::pow(1.0 + 2.0 * pi * pi, -0.5 * sigma), 1e-12);
  for (int r = 0; r < 5; ++r) {
    const SpectralField u = random_field(g, rng);
    const double plain = besov_norm(u, BesovSpec{0.2, kInf, kInf, 0.0});
    const double wt = besov_norm(u, BesovSpec{0.2, kInf, kInf, sigma});
    EXPECT_LE(wt, wmax * plain * (1 + 1e-14));
    EXPECT_GE(wt, wmin * plain * (1 - 1e-14));
    // for finite p the weight enters as w^{1/p}
    const double plain2 = besov_norm(u, BesovSpec{0.2, 2.0, 2.0, 0.0});
    const double wt2 = besov_norm(u, BesovSpec{0.2, 2.0, 2.0, sigma});
    EXPECT_LE(wt2, plain2 * (1 + 1e-14));
    EXPECT_GE(wt2, std::sqrt(wmin) * plain2 * (1 - 1e-14));
  }
}

TEST(Regularity, SmoothFieldHasLargeExponent)
{
  std::mt19937_64 rng(4);
  const TorusGrid g(32);
  SpectralField u = random_field(g, rng);
  u.for_each_mode([](int k1, int k2, auto& c) { c *= std::exp(-0.05 * (k1 * k1 + k2 * k2)); });
  const auto est = regularity_estimate(u);
  ASSERT_TRUE(est.defined);
  EXPECT_GT(est.alpha, 2.0);
}

TEST(Regularity, WhiteNoiseHasExponentMinusOne)
{
  std::mt19937_64 rng(5);
  const TorusGrid g(64);
  const DyadicPartition part(g);
  double sum = 0.0;
  const int n = 10;
  for (int r = 0; r < n; ++r) {
    const auto est = regularity_estimate(random_field(g, rng), part);
    ASSERT_TRUE(est.defined);
    sum += est.alpha;
  }
  EXPECT_NEAR(sum / n, -1.0, 0.2);
}

TEST(Regularity, DegenerateAndTooCoarse)
{
  EXPECT_FALSE(regularity_estimate(SpectralField(TorusGrid(16))).defined);
  EXPECT_FALSE(regularity_estimate(SpectralField::constant(TorusGrid(16), 1.0)).defined);
  EXPECT_THROW(regularity_estimate(SpectralField(TorusGrid(8))), ConfigurationError);
}

TEST(Schauder, NoGainIsContractionInL2)
{
  Rng rng(6);
  const TorusGrid g(16);
  const DyadicPartition part(g);
  const std::vector<double> ts = {1e-4, 1e-3, 1e-2, 0.1, 1.0};
  for (int r = 0; r < 5; ++r) {
    const SpectralField u = sample_stationary(g, rng);
    EXPECT_LE(schauder_check(u, -0.1, 0.0, ts, part, 2.0, 2.0), 1.0 + 1e-10);
    EXPECT_LE(schauder_check(u, -0.1, 0.0, ts, part, 2.0, kInf), 1.0 + 1e-10);
  }
}

TEST(Schauder, SingleModeClosedForm)
{
  const TorusGrid g(16);
  const DyadicPartition part(g);
  const SpectralField u = cosine_mode(g, 5, 3);
  const double alpha = -0.2, delta = 0.5;
  const double r = std::hypot(5.0, 3.0);
  auto weights = [&](double a) {
    double m = 0.0;
    for (int j = -1; j <= part.top(); ++j) {
      const double w = j < 0 ? chi_profile(r) : theta_profile(r / std::ldexp(1.0, j));
      m = std::max(m, block_scale(j, a) * w);
    }
    return m;
  };
  const std::vector<double> ts = {0.001, 0.01, 0.03, 0.1};
  double oracle = 0.0;
  for (double t : ts)
    oracle = std::max(oracle, std::pow(t, delta / 2) * weights(alpha + delta) * std::exp(-35.0 * t) / weights(alpha));
  EXPECT_NEAR(schauder_check(u, alpha, delta, ts, part), oracle, 1e-10);
  EXPECT_THROW(schauder_check(u, alpha, -0.1, ts, part), DomainError);
}
