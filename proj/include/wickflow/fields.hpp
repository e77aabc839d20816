#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "wickflow/grid.hpp"

namespace wickflow {

/// Samples of a real field on the M x M collocation grid, row-major with the
/// first index along x1: value(i, j) = f(2 pi i / M, 2 pi j / M).
class RealField
{
 public:
  explicit RealField(TorusGrid grid);
  RealField(TorusGrid grid, std::vector<double> values);

  static RealField constant(TorusGrid grid, double value);

  const TorusGrid& grid() const { return grid_; }

  double operator()(int i, int j) const { return values_[flat(i, j)]; }
  double& operator()(int i, int j) { return values_[flat(i, j)]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double sup_norm() const;
  /// Grid average, i.e. the integral against dx / (2 pi)^2 for band-limited data.
  double mean() const;
  bool all_finite() const;

  RealField& operator+=(const RealField& other);
  RealField& operator-=(const RealField& other);
  /// Pointwise product.
  RealField& operator*=(const RealField& other);
  RealField& operator*=(double s);

 private:
  std::size_t flat(int i, int j) const
  {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(grid_.M()) + static_cast<std::size_t>(j);
  }

  TorusGrid grid_;
  std::vector<double> values_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(RealField a, const RealField& b);
RealField operator*(double s, RealField a);

/// Fourier coefficients u_k = <u, e_k> of a real field in the orthonormal basis
/// e_k(x) = (2 pi)^-1 exp(i k.x), for k in {-K..K}^2. Real fields satisfy
/// u_{-k} = conj(u_k).
class SpectralField
{
 public:
  using value_type = std::complex<double>;

  explicit SpectralField(TorusGrid grid);

  /// Field identically equal to `value`; only k = 0 is nonzero, equal to 2 pi value.
  static SpectralField constant(TorusGrid grid, double value);

  const TorusGrid& grid() const { return grid_; }

  value_type operator()(int k1, int k2) const { return coeffs_[grid_.index(k1, k2)]; }
  value_type& operator()(int k1, int k2) { return coeffs_[grid_.index(k1, k2)]; }

  /// Sets u_k and u_{-k} = conj(u_k) together.
  void set_mode(int k1, int k2, value_type value);

  std::span<const value_type> coeffs() const { return coeffs_; }
  std::span<value_type> coeffs() { return coeffs_; }

  /// sqrt(sum_k |u_k|^2), equal to the L2(T^2) norm.
  double l2_norm() const;
  double max_abs() const;
  /// max_k |u_{-k} - conj(u_k)|.
  double hermitian_defect() const;
  bool all_finite() const;

  /// Calls f(k1, k2, value&) for every retained mode.
  template <class F>
  void for_each_mode(F&& f)
  {
    const int K = grid_.K();
    std::size_t n = 0;
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2) f(k1, k2, coeffs_[n++]);
  }
  template <class F>
  void for_each_mode(F&& f) const
  {
    const int K = grid_.K();
    std::size_t n = 0;
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2) f(k1, k2, coeffs_[n++]);
  }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

 private:
  TorusGrid grid_;
  std::vector<value_type> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Relative distance ||a - b|| / max(||a||, ||b||, tiny) in coefficient l2.
double relative_difference(const SpectralField& a, const SpectralField& b);
/// Relative distance in grid sup norm.
double relative_difference(const RealField& a, const RealField& b);

}  // namespace wickflow
