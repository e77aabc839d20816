#include "wickflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wickflow/errors.hpp"

namespace wickflow::stats {

double mean(std::span<const double> x)
{
  if (x.empty()) throw DomainError("mean: empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x)
{
  if (x.size() < 2) throw DomainError("variance: need at least two samples");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double standard_error(std::span<const double> x) { return std::sqrt(variance(x) / static_cast<double>(x.size())); }

double batch_means_error(std::span<const double> x, int n_batches)
{
  const std::size_t len = x.size() / static_cast<std::size_t>(n_batches);
  if (n_batches < 2 || len < 1) throw DomainError("batch_means_error: series too short");
  std::vector<double> means;
  for (int b = 0; b < n_batches; ++b) means.push_back(mean(x.subspan(b * len, len)));
  return standard_error(means);
}

double integrated_autocorrelation_time(std::span<const double> x, double c)
{
  const std::size_t n = x.size();
  if (n < 4) throw DomainError("integrated_autocorrelation_time: series too short");
  const double m = mean(x);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - m;
  double c0 = 0.0;
  for (double v : d) c0 += v * v;
  if (c0 == 0.0) return 1.0;
  double tau = 1.0;
  for (std::size_t w = 1; w < n / 2; ++w) {
    double cw = 0.0;
    for (std::size_t i = 0; i + w < n; ++i) cw += d[i] * d[i + w];
    tau += 2.0 * cw / c0;
    if (static_cast<double>(w) >= c * tau) break;
  }
  return std::max(tau, 1e-12);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b)
{
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double D = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    D = std::max(D, std::abs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * D;
  if (lam < 0.2) return KsResult{D, 1.0};
  double p = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
    p += term;
    if (std::abs(term) < 1e-16) break;
  }
  return KsResult{D, std::clamp(p, 0.0, 1.0)};
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size() || x.size() < 2) throw DomainError("linear_fit: need two or more paired points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    r += e * e;
  }
  f.residual = std::sqrt(r / static_cast<double>(x.size()));
  return f;
}

}  // namespace wickflow::stats
