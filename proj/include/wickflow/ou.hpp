#pragma once

#include <cstdint>
#include <vector>

#include "wickflow/fields.hpp"
#include "wickflow/rng.hpp"
#include "wickflow/wick.hpp"

namespace wickflow {

/// Galerkin stochastic convolution Z(t) = int_0^t e^{(t-s)A} dW(s) together
/// with the random stream driving it.
struct OUState
{
  double t = 0.0;
  SpectralField z;
  Rng rng;
};

OUState make_ou_state(const SpectralField& z0, std::uint64_t seed);

/// Exact transition over dt > 0, in place:
/// z_k <- e^{-lambda_k dt} z_k + sqrt((1 - e^{-2 lambda_k dt}) / (2 lambda_k)) xi_k.
/// `amplitude` scales the noise (0 gives the deterministic semigroup).
void ou_advance(OUState& s, double dt, double amplitude = 1.0);
OUState ou_step(OUState s, double dt);

/// Field of Hermitian-paired standard complex Gaussians (E|xi_k|^2 = 1, xi_0 real).
SpectralField standard_noise(const TorusGrid& grid, Rng& rng);

/// Exact sample of the truncated free field N(0, (1/2)(1 - Delta)^-1).
SpectralField sample_stationary(const TorusGrid& grid, Rng& rng);

/// Galerkin counterterms: c_C, c_Ct(t) = (2 pi)^-2 sum (1 - e^{-2 lambda t}) / (2 lambda),
/// and c_t = c_Ct - c_C.
class CounterTable
{
 public:
  explicit CounterTable(const TorusGrid& grid);

  /// Table whose stationary constant is `c_C` instead of the exact lattice value
  /// (c_t is recomputed against it). Used for deliberately broken renormalization.
  CounterTable with_stationary_value(double c_C) const;

  int K() const { return K_; }
  double c_C() const { return c_C_; }
  double c_Ct(double t) const;
  double c_t(double t) const { return c_Ct(t) - c_C_; }

  CounterTerm stationary() const { return CounterTerm{c_C_, CovarianceKind::C, K_, 0.0}; }
  CounterTerm at(double t) const { return CounterTerm{c_Ct(t), CovarianceKind::Ct, K_, t}; }

 private:
  int K_ = 0;
  double c_C_ = 0.0;
  // distinct eigenvalues with multiplicities
  std::vector<double> lambda_;
  std::vector<double> mult_;
};

/// C_t-ordered tower of Z(t) (variance c_Ct(t)).
WickTower tower_from_zero(const SpectralField& Z, double t, const CounterTable& table, int max_order);

/// Reorders a C_t tower with respect to C:
/// :Z^n:_C = sum_l c_t^l n! / ((n-2l)! l! 2^l) :Z^{n-2l}:_{C_t}.
WickTower convert_tower(const WickTower& tower, const CounterTable& table);

/// C-ordered tower of Zbar = Z + e^{tA} z0 via
/// :Zbar^n:_C = sum_k C(n,k) V^{n-k} :Z^k:_C, V = e^{tA} z0.
WickTower build_tower(const SpectralField& Z, const SpectralField& z0, double t, const CounterTable& table,
                      int max_order);

}  // namespace wickflow
