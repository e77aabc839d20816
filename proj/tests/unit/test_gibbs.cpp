#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "wickflow/gibbs.hpp"
#include "wickflow/ou.hpp"
#include "wickflow/spectral.hpp"
#include "wickflow/stats.hpp"

using namespace wickflow;

namespace {

void expect_within_3se(std::span<const double> x, double expect, double se, const std::string& what)
{
  EXPECT_LT(std::abs(stats::mean(x) - expect), 3.0 * se) << what << " mean " << stats::mean(x) << " se " << se;
}

}  // namespace

TEST(Observables, ClosedForms)
{
  const TorusGrid g(4);
  const auto c = counterterm_C(g);
  const double phi0 = 0.8;
  const auto o = observables(SpectralField::constant(g, phi0), c);
  EXPECT_NEAR(o.wick2, kTorusVolume * (phi0 * phi0 - c.value), 1e-12);
  const auto z = observables(SpectralField(g), c, true);
  EXPECT_NEAR(z.wick4, kTorusVolume * 3.0 * c.value * c.value, 1e-12);
  EXPECT_EQ(z.modes.size(), 13u);
  EXPECT_EQ(observable_names().size(), 15u);
  EXPECT_EQ(z.besov, 0.0);
  EXPECT_TRUE(std::isnan(observables(SpectralField(TorusGrid(1)), c, true).besov));
}

TEST(Observables, WickSquareOfFreeFieldHasZeroMean)
{
  const TorusGrid g(6);
  const auto c = counterterm_C(g);
  Rng rng(1);
  std::vector<double> w;
  for (int r = 0; r < 5000; ++r) w.push_back(observables(sample_stationary(g, rng), c).wick2);
  expect_within_3se(w, 0.0, stats::standard_error(w), "int :phi^2:");
}

TEST(Pcn, FreeCaseAlwaysAcceptsAndSamplesFreeField)
{
  const TorusGrid g(4);
  const auto c = counterterm_C(g);
  const auto P = PolynomialSpec::zero(2);
  ChainState s = make_chain(SpectralField(g), P, c, 2);
  const auto rec = run_chain(s, ChainOptions{40000, 1000, 1, 0.5, true}, P, c);
  EXPECT_EQ(rec.acceptance, 1.0);
  std::vector<double> sq;
  for (const auto& u : rec.samples) {
    const RealField f = to_real(u);
    sq.push_back(f(3, 1) * f(3, 1));
  }
  expect_within_3se(sq, c.value, stats::batch_means_error(sq), "pointwise variance");
}

TEST(Pcn, GaussianSubmodelModeVariances)
{
  const TorusGrid g(2);
  const auto c = counterterm_C(g);
  const auto P = PolynomialSpec::from_coefficients({0.0, 0.0, 0.5});
  ChainState s = make_chain(SpectralField(g), P, c, 3);
  ChainOptions opt{200000, 2000, 1, 0.6, false};
  std::map<std::pair<int, int>, std::vector<double>> m;
  for (long n = 0; n < opt.n_steps; ++n) {
    pcn_step(s, opt.rho, P, c);
    if (n < opt.burn_in) continue;
    for (auto k : observable_mode_list()) m[k].push_back(std::norm(s.phi(k.first, k.second)));
  }
  for (auto& [k, v] : m) {
    const double expect = 1.0 / (2.0 * (TorusGrid::eigenvalue(k.first, k.second) + 0.5));
    expect_within_3se(v, expect, stats::batch_means_error(v, 50),
                      "mode " + std::to_string(k.first) + "," + std::to_string(k.second));
  }
  EXPECT_NEAR(stats::mean(m[{0, 0}]), 1.0 / 3.0, 0.02);
}

TEST(Pcn, DetailedBalanceOnSingleMode)
{
  const TorusGrid g(0);
  const auto c = counterterm_C(g);
  const auto P = PolynomialSpec::from_coefficients({0.0, 0.0, 0.0, 0.0, 0.05});
  ChainState s = make_chain(SpectralField(g), P, c, 4);
  const int bins = 6;
  std::vector<std::vector<double>> N(bins, std::vector<double>(bins, 0.0));
  auto bin = [&](double x) { return std::clamp(static_cast<int>(std::floor((x + 1.5) / 0.5)), 0, bins - 1); };
  int prev = bin(s.phi(0, 0).real());
  for (int n = 0; n < 400000; ++n) {
    pcn_step(s, 0.7, P, c);
    const int cur = bin(s.phi(0, 0).real());
    N[prev][cur] += 1.0;
    prev = cur;
  }
  for (int i = 0; i < bins; ++i)
    for (int j = i + 1; j < bins; ++j) {
      const double se = std::sqrt(N[i][j] + N[j][i]);
      EXPECT_LT(std::abs(N[i][j] - N[j][i]), 3.0 * std::max(se, 1.0)) << i << "->" << j;
    }
}

TEST(Pcn, CachedActionMatchesRecomputation)
{
  const TorusGrid g(6);
  const auto c = counterterm_C(g);
  const auto P = PolynomialSpec::monomial(4, 0.25);
  ChainState s = make_chain(SpectralField(g), P, c, 5);
  for (int n = 0; n < 500; ++n) {
    pcn_step(s, 0.3, P, c);
    if (n % 50 == 0) {
      EXPECT_NEAR(s.action, wick_action(s.phi, P, c), 1e-10 * std::max(1.0, std::abs(s.action)));
    }
  }
  EXPECT_THROW(pcn_step(s, 0.0, P, c), DomainError);
  EXPECT_THROW(pcn_step(s, 1.5, P, c), DomainError);
}

TEST(Pcn, ConstantShiftOfActionLeavesDecisionsUnchanged)
{
  const TorusGrid g(4);
  const auto c = counterterm_C(g);
  const auto P = PolynomialSpec::from_coefficients({0.0, 0.0, 0.3, 0.0, 0.25});
  auto shifted = P;
  shifted.a[0] += 1e6 / kTorusVolume;
  ChainState a = make_chain(SpectralField(g), P, c, 6);
  ChainState b = make_chain(SpectralField(g), shifted, c, 6);
  for (int n = 0; n < 2000; ++n) {
    const auto ka = a.accepted, kb = b.accepted;
    pcn_step(a, 0.4, P, c);
    pcn_step(b, 0.4, shifted, c);
    ASSERT_EQ(a.accepted - ka, b.accepted - kb) << n;
  }
  EXPECT_GT(a.accepted, 0u);
  EXPECT_LT(a.accepted, a.proposed);
}

TEST(RunChain, SampleCountAndFreeCaseAutocorrelation)
{
  const TorusGrid g(3);
  const auto c = counterterm_C(g);
  const auto P = PolynomialSpec::zero(2);
  ChainState s = make_chain(SpectralField(g), P, c, 7);
  const auto short_run = run_chain(s, ChainOptions{137, 0, 1, 0.5, true}, P, c);
  EXPECT_EQ(short_run.samples.size(), 137u);
  EXPECT_EQ(run_chain(s, ChainOptions{1000, 100, 3, 0.5, true}, P, c).samples.size(), 300u);
  EXPECT_THROW(run_chain(s, ChainOptions{10, 10, 1, 0.5, true}, P, c), ConfigurationError);

  const double rho = 0.5;
  const auto rec = run_chain(s, ChainOptions{200000, 0, 1, rho, true}, P, c);
  std::vector<double> lin;
  for (const auto& u : rec.samples) lin.push_back(u(1, 0).real());
  const double a = std::sqrt(1.0 - rho * rho);
  EXPECT_NEAR(stats::integrated_autocorrelation_time(lin) / ((1 + a) / (1 - a)), 1.0, 0.15);
  // int :phi^2: is quadratic, so each mode autocorrelates with a^2
  EXPECT_GT(rec.iat, 1.0);
  EXPECT_LT(rec.iat, (1 + a) / (1 - a));
}

TEST(RunChain, QuarticTunedAcceptanceBand)
{
  const TorusGrid g(10);
  const auto c = counterterm_C(g);
  // a4 = 1/4 perturbs the free field so weakly (Var V ~ 0.01) that even
  // independence proposals are accepted > 90% of the time; the tuner saturates.
  const auto weak = PolynomialSpec::monomial(4, 0.25);
  ChainState s = make_chain(SpectralField(g), weak, c, 8);
  EXPECT_EQ(tune_rho(s, 0.2, weak, c, 4000), 1.0);
  EXPECT_GT(run_chain(s, ChainOptions{4000, 0, 1, 1.0, false}, weak, c).acceptance, 0.9);

  const auto strong = PolynomialSpec::monomial(4, 25.0);
  ChainState t = make_chain(SpectralField(g), strong, c, 8);
  const double rho = tune_rho(t, 0.2, strong, c, 4000);
  const auto rec = run_chain(t, ChainOptions{5000, 0, 1, rho, false}, strong, c);
  EXPECT_GT(rec.acceptance, 0.1);
  EXPECT_LT(rec.acceptance, 0.9);
  EXPECT_TRUE(rec.warning.empty());
}

TEST(RunChain, WarnsWhenAcceptanceCollapses)
{
  const TorusGrid g(10);
  const auto c = counterterm_C(g);
  const auto P = PolynomialSpec::monomial(4, 200.0);
  ChainState s = make_chain(SpectralField(g), P, c, 9);
  const auto rec = run_chain(s, ChainOptions{400, 0, 1, 1.0, false}, P, c);
  EXPECT_LT(rec.acceptance, 0.01);
  EXPECT_FALSE(rec.warning.empty());
}

TEST(Pcn, FreeChainMarginalsMatchDirectSamples)
{
  const TorusGrid g(4);
  const auto c = counterterm_C(g);
  const auto P = PolynomialSpec::zero(2);
  ChainState s = make_chain(SpectralField(g), P, c, 10);
  const auto rec = run_chain(s, ChainOptions{100500, 500, 10, 0.9, true}, P, c);
  Rng rng(11);
  std::vector<SpectralField> direct;
  for (std::size_t i = 0; i < rec.samples.size(); ++i) direct.push_back(sample_stationary(g, rng));
  auto features = [&](const std::vector<SpectralField>& v, int f) {
    std::vector<double> out;
    for (const auto& u : v) {
      const auto o = observables(u, c);
      switch (f) {
        case 0: out.push_back(o.wick2); break;
        case 1: out.push_back(o.wick4); break;
        case 2: out.push_back(u(0, 0).real()); break;
        case 3: out.push_back(u(1, -1).imag()); break;
        default: out.push_back(o.modes[4]); break;
      }
    }
    return out;
  };
  for (int f = 0; f < 5; ++f) EXPECT_GT(stats::ks_two_sample(features(rec.samples, f), features(direct, f)).p_value, 0.01) << f;
}
