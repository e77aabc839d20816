#include "wickflow/besov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wickflow/errors.hpp"
#include "wickflow/spectral.hpp"
#include "wickflow/stats.hpp"

namespace wickflow {

namespace {

double smooth_zero(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// 0 for x <= 0, 1 for x >= 1, C-infinity in between
double smooth_step(double x)
{
  const double a = smooth_zero(x);
  const double b = smooth_zero(1.0 - x);
  return a / (a + b);
}

constexpr double kInner = 0.75;
constexpr double kOuter = 4.0 / 3.0;

double block_weight(double j, double mult)
{
  return std::pow(2.0, std::max(j, 0.0) * mult);
}

}  // namespace

double chi_profile(double r) { return 1.0 - smooth_step((r - kInner) / (kOuter - kInner)); }

double theta_profile(double r) { return chi_profile(0.5 * r) - chi_profile(r); }

// ---------------------------------------------------------------------------
DyadicPartition::DyadicPartition(const TorusGrid& grid) : grid_(grid)
{
  const int K = grid.K();
  if (K < 2) throw ConfigurationError("DyadicPartition: K must be >= 2, got " + std::to_string(K));
  J_ = static_cast<int>(std::floor(std::log2(static_cast<double>(K)))) - 1;
  const double rmax = K * std::numbers::sqrt2;
  top_ = 0;
  while (kInner * std::ldexp(1.0, top_ + 1) <= rmax) ++top_;
  top_ = std::max(top_, J_);

  for (int j = -1; j <= top_; ++j) {
    std::vector<double> w(grid.mode_count());
    std::size_t n = 0;
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2, ++n) {
        const double r = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
        w[n] = j < 0 ? chi_profile(r) : theta_profile(std::ldexp(r, -j));
      }
    w_.push_back(std::move(w));
  }
}

std::size_t DyadicPartition::slot(int j) const
{
  if (j < -1 || j > top_)
    throw DomainError("DyadicPartition: block " + std::to_string(j) + " outside [-1, " + std::to_string(top_) + "]");
  return static_cast<std::size_t>(j + 1);
}

double DyadicPartition::weight(int j, int k1, int k2) const { return w_[slot(j)][grid_.index(k1, k2)]; }

SpectralField DyadicPartition::block(const SpectralField& u, int j) const
{
  if (!(u.grid() == grid_)) throw ConfigurationError("DyadicPartition: field lives on another grid");
  const auto& w = w_[slot(j)];
  SpectralField out = u;
  auto c = out.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= w[n];
  return out;
}

std::vector<SpectralField> DyadicPartition::blocks(const SpectralField& u) const
{
  std::vector<SpectralField> out;
  for (int j = -1; j <= top_; ++j) out.push_back(block(u, j));
  return out;
}

double DyadicPartition::sum_to_one_residual() const
{
  double r = 0.0;
  for (std::size_t n = 0; n < grid_.mode_count(); ++n) {
    double s = 0.0;
    for (const auto& w : w_) s += w[n];
    r = std::max(r, std::abs(s - 1.0));
  }
  return r;
}

double DyadicPartition::overlap(int i, int j) const
{
  const auto& a = w_[slot(i)];
  const auto& b = w_[slot(j)];
  double r = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) r = std::max(r, std::abs(a[n] * b[n]));
  return r;
}

// ---------------------------------------------------------------------------
double besov_weight(const TorusGrid& grid, int i, int j, double sigma)
{
  if (sigma == 0.0) return 1.0;
  auto centered = [&](int idx) {
    double x = idx * grid.spacing();
    if (x > std::numbers::pi) x -= kTwoPi;
    return x;
  };
  const double x1 = centered(i);
  const double x2 = centered(j);
  return std::pow(1.0 + x1 * x1 + x2 * x2, -0.5 * sigma);
}

double lp_norm(const RealField& f, double p, double sigma)
{
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  const int M = f.grid().M();
  if (std::isinf(p)) {
    double m = 0.0;
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) m = std::max(m, std::abs(f(i, j)) * besov_weight(f.grid(), i, j, sigma));
    return m;
  }
  double s = 0.0;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) s += std::pow(std::abs(f(i, j)), p) * besov_weight(f.grid(), i, j, sigma);
  return std::pow(s / static_cast<double>(f.grid().point_count()), 1.0 / p);
}

std::vector<double> block_norms(const SpectralField& u, const DyadicPartition& partition, double p)
{
  std::vector<double> out;
  for (int j = -1; j <= partition.top(); ++j) out.push_back(lp_norm(to_real(partition.block(u, j)), p));
  return out;
}

double besov_norm(const SpectralField& u, const BesovSpec& spec, const DyadicPartition& partition)
{
  if (!(spec.q >= 1.0)) throw DomainError("besov_norm: q must be >= 1");
  double acc = 0.0;
  for (int j = -1; j <= partition.top(); ++j) {
    const double b = block_weight(j, spec.alpha) * lp_norm(to_real(partition.block(u, j)), spec.p, spec.sigma);
    if (std::isinf(spec.q))
      acc = std::max(acc, b);
    else
      acc += std::pow(b, spec.q);
  }
  return std::isinf(spec.q) ? acc : std::pow(acc, 1.0 / spec.q);
}

double besov_norm(const SpectralField& u, const BesovSpec& spec)
{
  return besov_norm(u, spec, DyadicPartition(u.grid()));
}

RegularityEstimate regularity_estimate(const SpectralField& u, const DyadicPartition& partition)
{
  if (partition.J() < 3) throw ConfigurationError("regularity_estimate: need J >= 3 (K >= 16)");
  RegularityEstimate est;
  std::vector<double> js;
  for (int j = 1; j <= partition.J(); ++j) {
    const double n = lp_norm(to_real(partition.block(u, j)), kInf);
    if (!(n > 0.0) || !std::isfinite(n)) {
      est.log2_norms.clear();
      return est;
    }
    js.push_back(j);
    est.log2_norms.push_back(std::log2(n));
  }
  const auto fit = stats::linear_fit(js, est.log2_norms);
  est.alpha = -fit.slope;
  est.residual = fit.residual;
  est.defined = true;
  return est;
}

RegularityEstimate regularity_estimate(const SpectralField& u) { return regularity_estimate(u, DyadicPartition(u.grid())); }

double schauder_check(const SpectralField& u, double alpha, double delta, std::span<const double> t_grid,
                      const DyadicPartition& partition, double p, double q)
{
  if (!(delta >= 0.0)) throw DomainError("schauder_check: delta must be >= 0");
  const double base = besov_norm(u, BesovSpec{alpha, p, q, 0.0}, partition);
  if (!(base > 0.0)) throw DomainError("schauder_check: zero field");
  double worst = 0.0;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw DomainError("schauder_check: times must be > 0");
    const double n = besov_norm(apply_semigroup(u, t), BesovSpec{alpha + delta, p, q, 0.0}, partition);
    worst = std::max(worst, std::pow(t, 0.5 * delta) * n / base);
  }
  return worst;
}

double semigroup_log_slope(const SpectralField& u, double alpha, double delta, std::span<const double> t_grid,
                           const DyadicPartition& partition, double p, double q)
{
  std::vector<double> lt, ln;
  for (double t : t_grid) {
    lt.push_back(std::log(t));
    ln.push_back(std::log(besov_norm(apply_semigroup(u, t), BesovSpec{alpha + delta, p, q, 0.0}, partition)));
  }
  return stats::linear_fit(lt, ln).slope;
}

}  // namespace wickflow
