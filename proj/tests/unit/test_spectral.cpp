#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>

#include "test_fields.hpp"
#include "wickflow/errors.hpp"
#include "wickflow/spectral.hpp"

using namespace wickflow;
using wickflow::testing::evaluate_series;
using wickflow::testing::random_field;

TEST(TorusGrid, DefaultPaddingDealiasesCubics)
{
  for (int K : {0, 1, 4, 8, 10, 16}) {
    TorusGrid g(K);
    EXPECT_GE(g.M(), 2 * (2 * K + 1));
    EXPECT_GE(g.M(), 4 * K + 1);
    EXPECT_TRUE(g.supports_degree(3));
  }
  EXPECT_EQ(TorusGrid(8).M(), 34);
  EXPECT_EQ(TorusGrid(8, 5).M(), 49);
  EXPECT_TRUE(TorusGrid(8, 5).supports_degree(5));
  EXPECT_FALSE(TorusGrid(8).supports_degree(4));
}

TEST(TorusGrid, RejectsInvalidInput)
{
  EXPECT_THROW(TorusGrid(-1), ConfigurationError);
  EXPECT_THROW(TorusGrid(4, 0), ConfigurationError);
  EXPECT_THROW(TorusGrid::with_points(4, 9), ConfigurationError);
}

TEST(TorusGrid, EigenvaluesPositive)
{
  TorusGrid g(6);
  for (int k1 = -6; k1 <= 6; ++k1)
    for (int k2 = -6; k2 <= 6; ++k2) EXPECT_GE(TorusGrid::eigenvalue(k1, k2), 1.0);
  EXPECT_DOUBLE_EQ(TorusGrid::eigenvalue(1, 0), 2.0);
}

TEST(Transforms, RoundTripOnRandomGridData)
{
  // Random grid data is not band-limited; round trip holds after one projection.
  std::mt19937_64 rng(1);
  TorusGrid g(6);
  std::normal_distribution<double> n;
  RealField f(g);
  for (double& v : f.values()) v = n(rng);
  const RealField p = to_real(to_spectral(f));
  EXPECT_LT(relative_difference(to_real(to_spectral(p)), p), 1e-12);
}

TEST(Transforms, RoundTripOnBandLimitedFields)
{
  std::mt19937_64 rng(2);
  for (int K : {0, 1, 3, 8, 16}) {
    TorusGrid g(K);
    const SpectralField u = random_field(g, rng);
    EXPECT_LT(relative_difference(to_spectral(to_real(u)), u), 1e-12) << K;
    const RealField f = to_real(u);
    EXPECT_LT(relative_difference(to_real(to_spectral(f)), f), 1e-12) << K;
  }
}

TEST(Transforms, MatchesDirectSeriesEvaluation)
{
  std::mt19937_64 rng(3);
  TorusGrid g(3);
  const SpectralField u = random_field(g, rng);
  const RealField f = to_real(u);
  for (int i = 0; i < g.M(); i += 3)
    for (int j = 0; j < g.M(); j += 2) EXPECT_NEAR(f(i, j), evaluate_series(u, i, j), 1e-13);
}

TEST(Transforms, ConstantFieldHasSingleCoefficient)
{
  TorusGrid g(4);
  const SpectralField u = to_spectral(RealField::constant(g, 1.5));
  EXPECT_NEAR(u(0, 0).real(), kTwoPi * 1.5, 1e-13);
  EXPECT_NEAR(u(0, 0).imag(), 0.0, 1e-15);
  u.for_each_mode([](int k1, int k2, const auto& c) {
    if (k1 || k2) {
      EXPECT_LT(std::abs(c), 1e-13);
    }
  });
  EXPECT_NEAR(SpectralField::constant(g, 1.5)(0, 0).real(), kTwoPi * 1.5, 1e-15);
}

TEST(Transforms, CosineModeIsRealAndSymmetric)
{
  TorusGrid g(4);
  RealField f(g);
  for (int i = 0; i < g.M(); ++i)
    for (int j = 0; j < g.M(); ++j) f(i, j) = std::cos(i * g.spacing());
  const SpectralField u = to_spectral(f);
  // cos x1 = (2 pi)^-1 (pi e^{i x1} + pi e^{-i x1})
  EXPECT_NEAR(u(1, 0).real(), std::acos(-1.0), 1e-13);
  EXPECT_NEAR(u(-1, 0).real(), std::acos(-1.0), 1e-13);
  EXPECT_NEAR(u(1, 0).imag(), 0.0, 1e-13);
  double rest = 0.0;
  u.for_each_mode([&](int k1, int k2, const auto& c) {
    if (!(std::abs(k1) == 1 && k2 == 0)) rest = std::max(rest, std::abs(c));
  });
  EXPECT_LT(rest, 1e-13);
}

TEST(Transforms, HermitianSymmetryAndParseval)
{
  std::mt19937_64 rng(4);
  TorusGrid g(7);
  std::normal_distribution<double> n;
  RealField f(g);
  for (double& v : f.values()) v = n(rng);
  const SpectralField u = to_spectral(f);
  EXPECT_LT(u.hermitian_defect(), 1e-15);
  // L2 norm of the band-limited field by exact grid quadrature
  const RealField p = to_real(u);
  double s = 0.0;
  for (double v : p.values()) s += v * v;
  const double l2 = std::sqrt(s * kTorusVolume / static_cast<double>(g.point_count()));
  EXPECT_NEAR(l2 / u.l2_norm(), 1.0, 1e-12);
}

TEST(Transforms, IndependentOfThread)
{
  std::mt19937_64 rng(5);
  TorusGrid g(5);
  const SpectralField u = random_field(g, rng);
  RealField a = to_real(u);
  RealField b(g);
  std::thread th([&] { b = to_real(u); });
  th.join();
  EXPECT_EQ(relative_difference(a, b), 0.0);
}

TEST(Semigroup, SingleModeDecay)
{
  TorusGrid g(3);
  SpectralField u(g);
  u.set_mode(1, 0, {1.0, 0.0});
  const SpectralField v = apply_semigroup(u, 0.5);
  EXPECT_NEAR(v(1, 0).real(), 0.36787944117144233, 1e-15);
  EXPECT_NEAR(v(-1, 0).real(), 0.36787944117144233, 1e-15);
}

TEST(Semigroup, IdentityAtZeroAndExponentialLaw)
{
  std::mt19937_64 rng(6);
  TorusGrid g(6);
  const SpectralField u = random_field(g, rng);
  EXPECT_EQ(relative_difference(apply_semigroup(u, 0.0), u), 0.0);
  const SpectralField a = apply_semigroup(apply_semigroup(u, 0.13), 0.21);
  const SpectralField b = apply_semigroup(u, 0.34);
  EXPECT_LT(relative_difference(a, b), 1e-12);
  EXPECT_THROW(apply_semigroup(u, -1e-3), DomainError);
}

TEST(Semigroup, MultiplierStrictlyDecreasing)
{
  TorusGrid g(4);
  SpectralField one(g);
  one.for_each_mode([](int, int, auto& c) { c = 1.0; });
  const double ts[] = {0.0, 0.1, 0.2, 0.5};
  for (int i = 1; i < 4; ++i) {
    const SpectralField a = apply_semigroup(one, ts[i - 1]);
    const SpectralField b = apply_semigroup(one, ts[i]);
    a.for_each_mode([&](int k1, int k2, const auto& c) { EXPECT_LT(std::abs(b(k1, k2)), std::abs(c)); });
  }
  const SpectralField s = apply_semigroup(one, 0.3);
  for (int k = 0; k < 4; ++k) EXPECT_GT(std::abs(s(k, 0)), std::abs(s(k + 1, 0)));
  EXPECT_GT(std::abs(s(1, 1)), std::abs(s(2, 1)));
}

TEST(DealiasedProduct, Constants)
{
  TorusGrid g(3);
  const SpectralField f[] = {SpectralField::constant(g, 2.0), SpectralField::constant(g, 3.0)};
  const SpectralField p = dealiased_product(f);
  EXPECT_NEAR(p(0, 0).real(), kTwoPi * 6.0, 1e-12);
  EXPECT_LT((p - SpectralField::constant(g, 6.0)).max_abs(), 1e-12);
}

TEST(DealiasedProduct, CosineSquared)
{
  TorusGrid g(2);
  SpectralField c(g);
  const double pi = std::acos(-1.0);
  c.set_mode(1, 0, {pi, 0.0});  // cos x1
  const SpectralField f[] = {c, c};
  const SpectralField p = dealiased_product(f);
  // 1/2 + 1/2 cos 2x1
  EXPECT_NEAR(p(0, 0).real(), pi, 1e-13);
  EXPECT_NEAR(p(2, 0).real(), pi / 2.0, 1e-13);
  EXPECT_NEAR(p(-2, 0).real(), pi / 2.0, 1e-13);
  EXPECT_NEAR(p(1, 0).real(), 0.0, 1e-13);
}

// Coefficients of a product: (uv)_k = (2 pi)^-1 sum_l u_l v_{k-l}.
SpectralField brute_force_product(const SpectralField& u, const SpectralField& v)
{
  SpectralField out(u.grid());
  const int K = u.grid().K();
  out.for_each_mode([&](int k1, int k2, auto& c) {
    std::complex<double> s = 0.0;
    for (int l1 = -K; l1 <= K; ++l1)
      for (int l2 = -K; l2 <= K; ++l2)
        if (u.grid().contains(k1 - l1, k2 - l2)) s += u(l1, l2) * v(k1 - l1, k2 - l2);
    c = s / kTwoPi;
  });
  return out;
}

TEST(DealiasedProduct, MatchesBruteForceConvolution)
{
  std::mt19937_64 rng(7);
  for (int K : {1, 3, 5}) {
    TorusGrid g(K);
    const SpectralField u = random_field(g, rng);
    const SpectralField v = random_field(g, rng);
    const SpectralField f[] = {u, v};
    EXPECT_LT(relative_difference(dealiased_product(f), brute_force_product(u, v)), 1e-12) << K;
  }
}

TEST(DealiasedProduct, TripleProductMatchesNestedConvolution)
{
  std::mt19937_64 rng(8);
  TorusGrid g(3);
  // nested oracle on a wider lattice, truncated back
  TorusGrid wide(9);
  const SpectralField u = random_field(g, rng), v = random_field(g, rng), w = random_field(g, rng);
  const SpectralField uw = resample(u, wide), vw = resample(v, wide), ww = resample(w, wide);
  const SpectralField oracle = resample(brute_force_product(brute_force_product(uw, vw), ww), g);
  const SpectralField f[] = {u, v, w};
  EXPECT_LT(relative_difference(dealiased_product(f), oracle), 1e-12);
}

TEST(DealiasedProduct, CommutativeAndAssociative)
{
  std::mt19937_64 rng(9);
  TorusGrid g(6);
  const SpectralField u = random_field(g, rng), v = random_field(g, rng), w = random_field(g, rng);
  const SpectralField uv[] = {u, v}, vu[] = {v, u};
  EXPECT_LT(relative_difference(dealiased_product(uv), dealiased_product(vu)), 1e-12);
  const SpectralField uvw[] = {u, v, w}, wvu[] = {w, v, u};
  EXPECT_LT(relative_difference(dealiased_product(uvw), dealiased_product(wvu)), 1e-12);
}

TEST(DealiasedProduct, RejectsInsufficientPadding)
{
  TorusGrid g(4);
  const std::vector<SpectralField> f(4, SpectralField::constant(g, 1.0));
  EXPECT_THROW(dealiased_product(f), ConfigurationError);
  const SpectralField mixed[] = {SpectralField(g), SpectralField(TorusGrid(5))};
  EXPECT_THROW(dealiased_product(mixed), ConfigurationError);
}

TEST(Mollify, GaussianSymbol)
{
  std::mt19937_64 rng(10);
  TorusGrid g(5);
  const SpectralField u = random_field(g, rng);
  const double eps = 0.3;
  const SpectralField m = mollify(u, eps);
  u.for_each_mode([&](int k1, int k2, const auto& c) {
    const double sym = std::exp(-0.5 * eps * eps * (k1 * k1 + k2 * k2));
    EXPECT_NEAR(std::abs(m(k1, k2) - sym * c), 0.0, 1e-14);
  });
  EXPECT_EQ(relative_difference(mollify(u, 0.0), u), 0.0);
  const SpectralField c = SpectralField::constant(g, 2.5);
  EXPECT_EQ(relative_difference(mollify(c, 1.7), c), 0.0);
  EXPECT_THROW(mollify(u, -0.1), DomainError);
}

TEST(Truncate, KeepsLowModesOnly)
{
  std::mt19937_64 rng(11);
  TorusGrid g(6);
  const SpectralField u = random_field(g, rng);
  const SpectralField t = truncate(u, 2);
  t.for_each_mode([&](int k1, int k2, const auto& c) {
    if (std::abs(k1) <= 2 && std::abs(k2) <= 2)
      EXPECT_EQ(c, u(k1, k2));
    else
      EXPECT_EQ(std::abs(c), 0.0);
  });
  EXPECT_THROW(truncate(u, 7), ConfigurationError);
}
