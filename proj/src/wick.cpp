#include "wickflow/wick.hpp"

#include <string>

#include "wickflow/spectral.hpp"

namespace wickflow {

namespace {

void require_products(const TorusGrid& g, int degree, const char* what)
{
  if (degree >= 2 && !g.supports_degree(degree))
    throw ConfigurationError(std::string(what) + ": grid M = " + std::to_string(g.M()) + " cannot dealias degree " +
                             std::to_string(degree));
}

void require_quadrature(const TorusGrid& g, int degree, const char* what)
{
  // The grid mean of a degree-d band-limited polynomial is its exact integral when M > d K.
  if (g.K() > 0 && g.M() <= degree * g.K())
    throw ConfigurationError(std::string(what) + ": grid M = " + std::to_string(g.M()) +
                             " cannot integrate degree " + std::to_string(degree) + " exactly");
}

void require_variance(int n, double c)
{
  if (n >= 2 && !(c >= 0.0)) throw DomainError("wick_power: counterterm must be >= 0 for n >= 2");
}

RealField nonlinearity_pointwise(const RealField& u, const PolynomialSpec& P, double c)
{
  RealField out(u.grid());
  auto o = out.values();
  auto v = u.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    // sum_n n a_n H_{n-1}(x; c), running the recurrence once
    const double x = v[i];
    double prev = 1.0;
    double cur = x;
    double acc = P.coefficient(1);
    for (int m = 1; m <= P.degree() - 1; ++m) {
      acc += (m + 1) * P.coefficient(m + 1) * cur;
      const double next = x * cur - m * c * prev;
      prev = cur;
      cur = next;
    }
    o[i] = acc;
  }
  return out;
}

double action_density_mean(const RealField& u, const PolynomialSpec& P, double c)
{
  double sum = 0.0;
  for (double x : u.values()) {
    double prev = 1.0;
    double cur = x;
    double acc = P.coefficient(0);
    for (int m = 1; m <= P.degree(); ++m) {
      acc += P.coefficient(m) * cur;
      const double next = x * cur - m * c * prev;
      prev = cur;
      cur = next;
    }
    sum += acc;
  }
  return sum / static_cast<double>(u.grid().point_count());
}

}  // namespace

double binomial(int n, int k)
{
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double binomial_identity_check(int n, double s, double t)
{
  using Q = __float128;
  const Q qs = s;
  const Q qt = t;
  const Q lhs = hermite_scaled<Q>(n, qs + qt, Q(1));
  Q rhs = 0;
  for (int m = 0; m <= n; ++m) {
    Q tp = 1;
    for (int i = 0; i < n - m; ++i) tp *= qt;
    rhs += Q(binomial(n, m)) * hermite_scaled<Q>(m, qs, Q(1)) * tp;
  }
  const Q r = lhs - rhs;
  return static_cast<double>(r < 0 ? -r : r);
}

// ---------------------------------------------------------------------------
PolynomialSpec PolynomialSpec::from_coefficients(std::vector<double> a)
{
  while (a.size() > 1 && a.back() == 0.0) a.pop_back();
  const int deg = static_cast<int>(a.size()) - 1;
  if (deg < 2 || deg % 2 != 0)
    throw ConfigurationError("PolynomialSpec: degree must be even and >= 2, got " + std::to_string(deg));
  if (!(a.back() > 0.0)) throw ConfigurationError("PolynomialSpec: leading coefficient a_{2N} must be > 0");
  if (deg > kMaxHermiteOrder) throw ConfigurationError("PolynomialSpec: degree exceeds 16");
  PolynomialSpec P;
  P.N = deg / 2;
  P.a = std::move(a);
  return P;
}

PolynomialSpec PolynomialSpec::monomial(int degree, double coefficient)
{
  std::vector<double> a(static_cast<std::size_t>(std::max(degree, 0)) + 1, 0.0);
  a.back() = coefficient;
  return from_coefficients(std::move(a));
}

PolynomialSpec PolynomialSpec::zero(int N)
{
  if (N < 1) throw ConfigurationError("PolynomialSpec: N must be >= 1");
  PolynomialSpec P;
  P.N = N;
  P.a.assign(static_cast<std::size_t>(2 * N) + 1, 0.0);
  return P;
}

PolynomialSpec PolynomialSpec::scaled(double c) const
{
  PolynomialSpec P = *this;
  for (double& x : P.a) x *= c;
  return P;
}

double PolynomialSpec::q(double x) const
{
  double r = 0.0;
  for (int n = degree(); n >= 0; --n) r = r * x + coefficient(n);
  return r;
}

double PolynomialSpec::p(double x) const
{
  double r = 0.0;
  for (int n = degree(); n >= 1; --n) r = r * x + n * coefficient(n);
  return r;
}

// ---------------------------------------------------------------------------
CounterTerm counterterm_C(const TorusGrid& grid)
{
  const int K = grid.K();
  double s = 0.0;
  for (int k1 = -K; k1 <= K; ++k1)
    for (int k2 = -K; k2 <= K; ++k2) s += 0.5 / TorusGrid::eigenvalue(k1, k2);
  return CounterTerm{s / kTorusVolume, CovarianceKind::C, K, 0.0};
}

RealField wick_power_pointwise(const RealField& u, int n, double c)
{
  require_variance(n, c);
  RealField out(u.grid());
  auto o = out.values();
  auto v = u.values();
  for (std::size_t i = 0; i < v.size(); ++i) o[i] = hermite_scaled(n, v[i], c);
  return out;
}

SpectralField wick_power(const SpectralField& u, int n, const CounterTerm& c)
{
  require_products(u.grid(), n, "wick_power");
  return to_spectral(wick_power_pointwise(to_real(u), n, c.value));
}

RealField wick_power(const RealField& u, int n, const CounterTerm& c)
{
  require_products(u.grid(), n, "wick_power");
  return to_real(to_spectral(wick_power_pointwise(u, n, c.value)));
}

SpectralField wick_nonlinearity(const SpectralField& u, const PolynomialSpec& P, const CounterTerm& c)
{
  return to_spectral(wick_nonlinearity(to_real(u), P, c));
}

RealField wick_nonlinearity(const RealField& u, const PolynomialSpec& P, const CounterTerm& c)
{
  require_products(u.grid(), P.max_wick_order(), "wick_nonlinearity");
  require_variance(P.max_wick_order(), c.value);
  return to_real(to_spectral(nonlinearity_pointwise(u, P, c.value)));
}

double wick_action(const SpectralField& u, const PolynomialSpec& P, const CounterTerm& c)
{
  return wick_action(to_real(u), P, c);
}

double wick_action(const RealField& u, const PolynomialSpec& P, const CounterTerm& c)
{
  require_quadrature(u.grid(), P.degree(), "wick_action");
  require_variance(P.degree(), c.value);
  return kTorusVolume * action_density_mean(u, P, c.value);
}

// ---------------------------------------------------------------------------
WickTower make_tower(const SpectralField& z, int max_order, const CounterTerm& c)
{
  require_variance(max_order, c.value);
  WickTower tw;
  tw.t = c.time;
  tw.kind = c.kind;
  tw.variance = c.value;
  const RealField zr = to_real(z);
  tw.orders.reserve(static_cast<std::size_t>(max_order) + 1);
  for (int j = 0; j <= max_order; ++j) tw.orders.push_back(wick_power_pointwise(zr, j, c.value));
  return tw;
}

WickTower zero_tower(const TorusGrid& grid, int max_order)
{
  WickTower tw;
  tw.orders.push_back(RealField::constant(grid, 1.0));
  for (int j = 1; j <= max_order; ++j) tw.orders.emplace_back(grid);
  return tw;
}

RealField recombine_pointwise(const RealField& y, const WickTower& tower, int n)
{
  if (n < 0 || n > tower.max_order())
    throw ConfigurationError("recombine: tower lacks order " + std::to_string(n));
  if (!(y.grid() == tower.grid())) throw ConfigurationError("recombine: field and tower live on different grids");
  RealField out(y.grid());
  auto o = out.values();
  auto yv = y.values();
  // Horner in y: sum_k C(n,k) y^{n-k} T_k
  std::vector<double> coef(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) coef[k] = binomial(n, k);
  for (std::size_t i = 0; i < o.size(); ++i) {
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) acc = acc * yv[i] + coef[k] * tower.orders[k].values()[i];
    o[i] = acc;
  }
  return out;
}

SpectralField recombine(const SpectralField& y, const WickTower& tower, int n)
{
  require_products(y.grid(), n, "recombine");
  return to_spectral(recombine_pointwise(to_real(y), tower, n));
}

}  // namespace wickflow
