#pragma once

#include <span>
#include <vector>

namespace wickflow::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
/// Standard error of the mean for independent samples.
double standard_error(std::span<const double> x);
/// Standard error of the mean of a correlated series via non-overlapping batch means.
double batch_means_error(std::span<const double> x, int n_batches = 32);

/// Integrated autocorrelation time tau = 1 + 2 sum rho(t), with Sokal's
/// automatic window (smallest W with W >= c tau(W)).
double integrated_autocorrelation_time(std::span<const double> x, double c = 6.0);

struct KsResult
{
  double statistic = 0.0;
  double p_value = 1.0;
};
/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov distribution.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct LinearFit
{
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual.
  double residual = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace wickflow::stats
