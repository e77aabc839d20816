#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wickflow/gibbs.hpp"
#include "wickflow/ou.hpp"
#include "wickflow/wick.hpp"

namespace wickflow {

struct SolverConfig
{
  double dt = 1e-3;
  double horizon = 0.25;
  int record_every = 1;
  /// Rebuild the Wick tower every r steps.
  int tower_refresh = 1;
  /// Exact OU substeps per solver step; equal noise_dt = dt / noise_substeps
  /// across runs shares one noise path between step sizes.
  int noise_substeps = 1;
  double noise_amplitude = 1.0;
  bool keep_snapshots = false;
  double blowup_threshold = 1e8;
  /// Multiplies the stationary counterterm used by the dynamics (1 = correct).
  double counterterm_scale = 1.0;

  void validate() const;
  long steps() const;
};

struct Trajectory
{
  std::vector<double> times;
  /// Observables of X, Wick-ordered with the exact c_C.
  std::vector<FieldObservables> observables;
  std::vector<double> y_sup;
  std::vector<SpectralField> Y;
  std::vector<SpectralField> X;
  std::optional<SpectralField> y_final;
  std::optional<SpectralField> x_final;
  std::optional<SpectralField> zbar_final;
  /// max over record points of ||X - Y - Zbar||_l2 / max(1, ||X||_l2).
  double reconstruction_residual = 0.0;
};

class BlowUpError : public std::runtime_error
{
 public:
  BlowUpError(double time, SpectralField last_valid, Trajectory partial);
  double time() const { return time_; }
  const SpectralField& last_valid() const { return last_valid_; }
  const Trajectory& partial() const { return partial_; }

 private:
  double time_;
  SpectralField last_valid_;
  Trajectory partial_;
};

class HorizonTooLargeError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// Pointwise sum_k k a_k sum_l C(k-1, l) Y^l :Zbar^{k-1-l}:.
RealField nonlinear_term_pointwise(const RealField& Y, const WickTower& tower, const PolynomialSpec& P);
SpectralField nonlinear_term(const SpectralField& Y, const WickTower& tower, const PolynomialSpec& P);

/// Exponential Euler: Y <- e^{dt A} Y - ((1 - e^{-lambda dt}) / lambda) F(Y).
SpectralField step(const SpectralField& Y, const WickTower& tower, double dt, const PolynomialSpec& P);

/// Shifted equation from Y(0) = y0 with Zbar = Z + e^{tA} z0; records X = Y + Zbar.
Trajectory solve(const SpectralField& y0, const SpectralField& z0, std::uint64_t seed, const SolverConfig& cfg,
                 const PolynomialSpec& P);

/// Stationary splitting: Z1 = e^{tA} Z1(0) + Z with Z1(0) from the free field
/// (or given), Y1(0) = z0 - Z1(0), X = Y1 + Z1. Trajectory::Y holds Y1 and
/// zbar_final holds Z1(T).
Trajectory solve_alternative_splitting(const SpectralField& z0, std::uint64_t seed, const SolverConfig& cfg,
                                       const PolynomialSpec& P,
                                       const std::optional<SpectralField>& z1_initial = std::nullopt);

/// Stream used for Z1(0) in solve_alternative_splitting.
std::uint64_t alternative_initial_seed(std::uint64_t seed);

/// Solve with zero Gibbs-distributed shift: Y(0) = eta, Zbar = Z.
Trajectory stationary_solve(const SpectralField& eta, std::uint64_t seed, const SolverConfig& cfg,
                            const PolynomialSpec& P);

/// Towers of Zbar at t_n = n dt, n = 0..steps, on the noise path used by solve.
std::vector<WickTower> tower_path(const SpectralField& z0, std::uint64_t seed, const SolverConfig& cfg, int max_order);

struct PicardResult
{
  std::vector<SpectralField> path;
  /// max_n ||Y^{(i+1)}_n - Y^{(i)}_n||_l2 per iteration.
  std::vector<double> residuals;
  int iterations = 0;
};

/// Fixed point of the discrete mild map
/// Y_{n+1} = e^{dt A} Y_n - ((1 - e^{-lambda dt}) / lambda) (F_n + F_{n+1}) / 2
/// along frozen towers. Throws HorizonTooLargeError when the iteration does not contract.
PicardResult picard_solve(const SpectralField& y0, const std::vector<WickTower>& towers, double dt,
                          const PolynomialSpec& P, double tol = 1e-8, int max_iter = 200);

}  // namespace wickflow
