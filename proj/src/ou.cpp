#include "wickflow/ou.hpp"

#include <cmath>
#include <map>
#include <string>

#include "wickflow/spectral.hpp"

namespace wickflow {

OUState make_ou_state(const SpectralField& z0, std::uint64_t seed) { return OUState{0.0, z0, Rng(seed)}; }

SpectralField standard_noise(const TorusGrid& grid, Rng& rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField xi(grid);
  const int K = grid.K();
  xi(0, 0) = normal(rng);
  const double h = std::sqrt(0.5);
  // upper half-plane: k1 > 0, or k1 == 0 and k2 > 0
  for (int k1 = 0; k1 <= K; ++k1) {
    for (int k2 = (k1 == 0 ? 1 : -K); k2 <= K; ++k2) {
      const double re = normal(rng);
      const double im = normal(rng);
      xi.set_mode(k1, k2, {h * re, h * im});
    }
  }
  return xi;
}

void ou_advance(OUState& s, double dt, double amplitude)
{
  if (!(dt > 0.0)) throw DomainError("ou_step: dt must be > 0");
  SpectralField xi = standard_noise(s.z.grid(), s.rng);
  auto zc = s.z.coeffs();
  auto xc = xi.coeffs();
  std::size_t n = 0;
  const int K = s.z.grid().K();
  for (int k1 = -K; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2, ++n) {
      const double lam = TorusGrid::eigenvalue(k1, k2);
      const double decay = std::exp(-lam * dt);
      const double sd = std::sqrt(-std::expm1(-2.0 * lam * dt) / (2.0 * lam));
      zc[n] = decay * zc[n] + amplitude * sd * xc[n];
    }
  }
  s.t += dt;
}

OUState ou_step(OUState s, double dt)
{
  ou_advance(s, dt);
  return s;
}

SpectralField sample_stationary(const TorusGrid& grid, Rng& rng)
{
  SpectralField xi = standard_noise(grid, rng);
  xi.for_each_mode([](int k1, int k2, auto& c) { c *= std::sqrt(0.5 / TorusGrid::eigenvalue(k1, k2)); });
  return xi;
}

// ---------------------------------------------------------------------------
CounterTable::CounterTable(const TorusGrid& grid) : K_(grid.K())
{
  std::map<int, int> counts;
  for (int k1 = -K_; k1 <= K_; ++k1)
    for (int k2 = -K_; k2 <= K_; ++k2) ++counts[k1 * k1 + k2 * k2];
  double s = 0.0;
  for (auto [k2, m] : counts) {
    lambda_.push_back(1.0 + k2);
    mult_.push_back(m);
    s += m * 0.5 / (1.0 + k2);
  }
  c_C_ = s / kTorusVolume;
}

CounterTable CounterTable::with_stationary_value(double c_C) const
{
  CounterTable t = *this;
  t.c_C_ = c_C;
  return t;
}

double CounterTable::c_Ct(double t) const
{
  if (!(t >= 0.0)) throw DomainError("CounterTable: t must be >= 0");
  double s = 0.0;
  for (std::size_t i = 0; i < lambda_.size(); ++i) s += mult_[i] * -std::expm1(-2.0 * lambda_[i] * t) / (2.0 * lambda_[i]);
  return s / kTorusVolume;
}

// ---------------------------------------------------------------------------
WickTower tower_from_zero(const SpectralField& Z, double t, const CounterTable& table, int max_order)
{
  if (Z.grid().K() != table.K()) throw ConfigurationError("tower_from_zero: counter table built for another K");
  return make_tower(Z, max_order, table.at(t));
}

WickTower convert_tower(const WickTower& tower, const CounterTable& table)
{
  if (tower.kind != CovarianceKind::Ct) throw ConfigurationError("convert_tower: tower is not C_t-ordered");
  if (tower.grid().K() != table.K()) throw ConfigurationError("convert_tower: counter table built for another K");
  const double ct = table.c_t(tower.t);
  WickTower out;
  out.t = tower.t;
  out.kind = CovarianceKind::C;
  out.variance = table.c_C();
  const int nmax = tower.max_order();
  for (int n = 0; n <= nmax; ++n) {
    RealField acc = tower.orders[n];
    double ctl = 1.0;
    for (int l = 1; 2 * l <= n; ++l) {
      ctl *= ct;
      // n! / ((n-2l)! l! 2^l)
      double w = 1.0;
      for (int i = n - 2 * l + 1; i <= n; ++i) w *= i;
      for (int i = 1; i <= l; ++i) w /= 2.0 * i;
      RealField term = tower.orders[n - 2 * l];
      term *= ctl * w;
      acc += term;
    }
    out.orders.push_back(std::move(acc));
  }
  return out;
}

WickTower build_tower(const SpectralField& Z, const SpectralField& z0, double t, const CounterTable& table,
                      int max_order)
{
  if (!(Z.grid() == z0.grid())) throw ConfigurationError("build_tower: Z and z0 live on different grids");
  WickTower zc = convert_tower(tower_from_zero(Z, t, table, max_order), table);
  const RealField V = to_real(apply_semigroup(z0, t));
  WickTower out;
  out.t = t;
  out.kind = CovarianceKind::C;
  out.variance = table.c_C();
  for (int n = 0; n <= max_order; ++n) out.orders.push_back(recombine_pointwise(V, zc, n));
  return out;
}

}  // namespace wickflow
