#pragma once

#include <limits>
#include <span>
#include <vector>

#include "wickflow/fields.hpp"

namespace wickflow {

/// Radial profiles of the dyadic partition: chi = 1 on r <= 3/4 and 0 for
/// r >= 4/3; theta(r) = chi(r/2) - chi(r) lives on [3/4, 8/3].
double chi_profile(double r);
double theta_profile(double r);

/// Littlewood-Paley multipliers on the frequency lattice of one grid.
/// Blocks j = -1..top() cover every retained frequency, so sum_j Delta_j = id
/// exactly; J() = floor(log2 K) - 1 is the range used for slope fits.
class DyadicPartition
{
 public:
  explicit DyadicPartition(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  int J() const { return J_; }
  int top() const { return top_; }
  /// Multiplier of block j at frequency k.
  double weight(int j, int k1, int k2) const;

  SpectralField block(const SpectralField& u, int j) const;
  std::vector<SpectralField> blocks(const SpectralField& u) const;

  /// max_k |sum_j weight(j, k) - 1|.
  double sum_to_one_residual() const;
  /// max_k |weight(i, k) weight(j, k)|.
  double overlap(int i, int j) const;

 private:
  std::size_t slot(int j) const;

  TorusGrid grid_;
  int J_ = 0;
  int top_ = 0;
  std::vector<std::vector<double>> w_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct BesovSpec
{
  double alpha = 0.0;
  double p = kInf;
  double q = kInf;
  /// Weight exponent of w(x) = (1 + |x|^2)^{-sigma/2}; 0 disables the weight.
  double sigma = 0.0;
};

/// L^p norm of a grid field against dx / (2 pi)^2, optionally weighted; for
/// p = inf the weighted norm is max |w f|.
double lp_norm(const RealField& f, double p, double sigma = 0.0);

/// Weight w evaluated at grid point (i, j), with x taken in the fundamental
/// domain (-pi, pi]^2.
double besov_weight(const TorusGrid& grid, int i, int j, double sigma);

/// (sum_j (2^{max(j,0) alpha} ||Delta_j u||_{L^p})^q)^{1/q}.
double besov_norm(const SpectralField& u, const BesovSpec& spec, const DyadicPartition& partition);
double besov_norm(const SpectralField& u, const BesovSpec& spec);

/// ||Delta_j u||_{L^p} for j = -1..top(), index j + 1.
std::vector<double> block_norms(const SpectralField& u, const DyadicPartition& partition, double p = kInf);

struct RegularityEstimate
{
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  bool defined = false;
  /// log2 ||Delta_j u||_inf for j = 1..J.
  std::vector<double> log2_norms;
};

/// alpha = -slope of log2 ||Delta_j u||_inf against j over j = 1..J.
RegularityEstimate regularity_estimate(const SpectralField& u, const DyadicPartition& partition);
RegularityEstimate regularity_estimate(const SpectralField& u);

/// max over t of t^{delta/2} ||e^{tA} u||_{alpha+delta} / ||u||_alpha.
double schauder_check(const SpectralField& u, double alpha, double delta, std::span<const double> t_grid,
                      const DyadicPartition& partition, double p = kInf, double q = kInf);

/// Least-squares slope of log ||e^{tA} u||_{B^{alpha+delta}} against log t.
double semigroup_log_slope(const SpectralField& u, double alpha, double delta, std::span<const double> t_grid,
                           const DyadicPartition& partition, double p = kInf, double q = kInf);

}  // namespace wickflow
