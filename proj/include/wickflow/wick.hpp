#pragma once

#include <cmath>
#include <vector>

#include "wickflow/errors.hpp"
#include "wickflow/fields.hpp"

namespace wickflow {

inline constexpr int kMaxHermiteOrder = 16;

/// H_n(x; c) = c^{n/2} P_n(x / sqrt(c)) via H_{n+1} = x H_n - n c H_{n-1}.
/// Defined for all c >= 0; c = 0 gives x^n.
template <class T>
T hermite_scaled(int n, T x, T c)
{
  if (n < 0 || n > kMaxHermiteOrder) throw DomainError("hermite: order out of range [0, 16]");
  if (n == 0) return T(1);
  T prev = T(1);
  T cur = x;
  for (int m = 1; m < n; ++m) {
    T next = x * cur - T(m) * c * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Probabilists' Hermite polynomial P_n(x).
inline double hermite(int n, double x) { return hermite_scaled<double>(n, x, 1.0); }

/// Binomial coefficient C(n, k) as a double; 0 outside 0 <= k <= n.
double binomial(int n, int k);

/// |P_n(s+t) - sum_m C(n,m) P_m(s) t^{n-m}|, evaluated in binary128 and
/// rounded to double.
double binomial_identity_check(int n, double s, double t);

/// q(x) = sum_n a_n x^n of degree 2N with a_{2N} > 0, and p = q'.
struct PolynomialSpec
{
  int N = 0;
  std::vector<double> a;

  static PolynomialSpec from_coefficients(std::vector<double> a);
  /// Pure monomial a x^{2N} with lower coefficients zero.
  static PolynomialSpec monomial(int degree, double coefficient);
  /// q = 0 of nominal degree 2N (free field); bypasses the a_{2N} > 0 check.
  static PolynomialSpec zero(int N);

  int degree() const { return 2 * N; }
  double coefficient(int n) const { return n >= 0 && n < static_cast<int>(a.size()) ? a[n] : 0.0; }
  /// Coefficient tuple of c q.
  PolynomialSpec scaled(double c) const;
  double q(double x) const;
  double p(double x) const;
  /// Highest Wick order entering p, i.e. 2N - 1.
  int max_wick_order() const { return 2 * N - 1; }
};

enum class CovarianceKind
{
  C,   ///< stationary free field
  Ct,  ///< law of Z(t) started from zero
};

struct CounterTerm
{
  double value = 0.0;
  CovarianceKind kind = CovarianceKind::C;
  int K = -1;
  double time = 0.0;

  static CounterTerm fixed(double value) { return CounterTerm{value, CovarianceKind::C, -1, 0.0}; }
};

/// Pointwise variance (2 pi)^-2 sum_k 1 / (2 lambda_k) of the truncated free field.
CounterTerm counterterm_C(const TorusGrid& grid);

/// Pointwise H_n(u(x); c) on the collocation grid, without projection.
RealField wick_power_pointwise(const RealField& u, int n, double c);

/// :u^n:_c projected onto the retained modes. Requires the grid to dealias n factors.
SpectralField wick_power(const SpectralField& u, int n, const CounterTerm& c);
RealField wick_power(const RealField& u, int n, const CounterTerm& c);

/// :p(u): = sum_n n a_n :u^{n-1}:_c, projected.
SpectralField wick_nonlinearity(const SpectralField& u, const PolynomialSpec& P, const CounterTerm& c);
RealField wick_nonlinearity(const RealField& u, const PolynomialSpec& P, const CounterTerm& c);

/// Integral over the torus of :q(u):_c. Exact for band-limited u when M > 2N K.
double wick_action(const SpectralField& u, const PolynomialSpec& P, const CounterTerm& c);
double wick_action(const RealField& u, const PolynomialSpec& P, const CounterTerm& c);

/// Wick powers :Zbar^j: for j = 0..orders.size()-1 at one time, stored as
/// unprojected grid values so that the binomial identities hold exactly.
struct WickTower
{
  double t = 0.0;
  std::vector<RealField> orders;
  CovarianceKind kind = CovarianceKind::C;
  /// Variance constant the tower is ordered against.
  double variance = 0.0;

  int max_order() const { return static_cast<int>(orders.size()) - 1; }
  const TorusGrid& grid() const { return orders.front().grid(); }
};

/// Tower of H_j(z; c) for j = 0..max_order.
WickTower make_tower(const SpectralField& z, int max_order, const CounterTerm& c);
/// Tower of the zero field with no counterterm: orders[0] = 1, the rest 0.
WickTower zero_tower(const TorusGrid& grid, int max_order);

/// Pointwise sum_k C(n,k) y^{n-k} tower[k].
RealField recombine_pointwise(const RealField& y, const WickTower& tower, int n);
/// Projected recombination; throws ConfigurationError when tower order n is missing.
SpectralField recombine(const SpectralField& y, const WickTower& tower, int n);

}  // namespace wickflow
