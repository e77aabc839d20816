#include "wickflow/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "wickflow/errors.hpp"

namespace wickflow {

namespace {

// FFTW planning is not thread safe; execution on distinct buffers is.
std::mutex& planner_mutex()
{
  static std::mutex m;
  return m;
}

struct Workspace
{
  explicit Workspace(int M) : M(M), half(M / 2 + 1)
  {
    const std::size_t n_real = static_cast<std::size_t>(M) * M;
    const std::size_t n_cplx = static_cast<std::size_t>(M) * half;
    real = fftw_alloc_real(n_real);
    cplx = fftw_alloc_complex(n_cplx);
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_r2c_2d(M, M, real, cplx, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_2d(M, M, cplx, real, FFTW_ESTIMATE);
  }
  ~Workspace()
  {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(forward);
      fftw_destroy_plan(backward);
    }
    fftw_free(real);
    fftw_free(cplx);
  }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  int M;
  int half;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

Workspace& workspace(int M)
{
  thread_local std::map<int, std::unique_ptr<Workspace>> cache;
  auto& slot = cache[M];
  if (!slot) slot = std::make_unique<Workspace>(M);
  return *slot;
}

int wrap(int k, int M) { return k < 0 ? k + M : k; }

}  // namespace

SpectralField to_spectral(const RealField& f)
{
  const TorusGrid& g = f.grid();
  const int M = g.M();
  const int K = g.K();
  Workspace& ws = workspace(M);
  auto v = f.values();
  std::copy(v.begin(), v.end(), ws.real);
  fftw_execute(ws.forward);

  const double scale = kTwoPi / (static_cast<double>(M) * M);
  SpectralField u(g);
  for (int k1 = -K; k1 <= K; ++k1) {
    const std::size_t row = static_cast<std::size_t>(wrap(k1, M)) * ws.half;
    for (int k2 = 0; k2 <= K; ++k2) {
      const fftw_complex& c = ws.cplx[row + static_cast<std::size_t>(k2)];
      const std::complex<double> z(c[0] * scale, c[1] * scale);
      u(k1, k2) = z;
      if (k2 > 0) u(-k1, -k2) = std::conj(z);
    }
  }
  // k2 = 0 column is Hermitian in k1 up to roundoff; symmetrize it exactly.
  for (int k1 = 1; k1 <= K; ++k1) {
    const std::complex<double> avg = 0.5 * (u(k1, 0) + std::conj(u(-k1, 0)));
    u(k1, 0) = avg;
    u(-k1, 0) = std::conj(avg);
  }
  u(0, 0) = std::complex<double>(u(0, 0).real(), 0.0);
  return u;
}

RealField to_real(const SpectralField& u)
{
  const TorusGrid& g = u.grid();
  const int M = g.M();
  const int K = g.K();
  Workspace& ws = workspace(M);
  std::fill_n(&ws.cplx[0][0], 2 * static_cast<std::size_t>(M) * ws.half, 0.0);

  const double scale = 1.0 / kTwoPi;
  for (int k1 = -K; k1 <= K; ++k1) {
    const std::size_t row = static_cast<std::size_t>(wrap(k1, M)) * ws.half;
    for (int k2 = 0; k2 <= K; ++k2) {
      const std::complex<double> z = u(k1, k2) * scale;
      ws.cplx[row + static_cast<std::size_t>(k2)][0] = z.real();
      ws.cplx[row + static_cast<std::size_t>(k2)][1] = z.imag();
    }
  }
  fftw_execute(ws.backward);
  RealField f(g);
  auto v = f.values();
  std::copy(ws.real, ws.real + v.size(), v.begin());
  return f;
}

SpectralField apply_semigroup(const SpectralField& u, double t)
{
  if (!(t >= 0.0)) throw DomainError("apply_semigroup: t must be >= 0");
  SpectralField out = u;
  out.for_each_mode([t](int k1, int k2, auto& c) { c *= std::exp(-TorusGrid::eigenvalue(k1, k2) * t); });
  return out;
}

SpectralField dealiased_product(std::span<const SpectralField> factors)
{
  if (factors.empty()) throw ConfigurationError("dealiased_product: no factors");
  const TorusGrid& g = factors.front().grid();
  const int d = static_cast<int>(factors.size());
  if (!g.supports_degree(d))
    throw ConfigurationError("dealiased_product: grid M = " + std::to_string(g.M()) + " dealiases at most " +
                             std::to_string(g.degree()) + " factors, got " + std::to_string(d));
  RealField prod = to_real(factors.front());
  for (std::size_t i = 1; i < factors.size(); ++i) {
    if (!(factors[i].grid() == g)) throw ConfigurationError("dealiased_product: factors live on different grids");
    prod *= to_real(factors[i]);
  }
  return to_spectral(prod);
}

SpectralField mollify(const SpectralField& u, double eps)
{
  if (!(eps >= 0.0)) throw DomainError("mollify: eps must be >= 0");
  SpectralField out = u;
  const double h = 0.5 * eps * eps;
  out.for_each_mode([h](int k1, int k2, auto& c) { c *= std::exp(-h * (k1 * k1 + k2 * k2)); });
  return out;
}

SpectralField truncate(const SpectralField& u, int K_target)
{
  if (K_target < 0 || K_target > u.grid().K())
    throw ConfigurationError("truncate: K_target must lie in [0, " + std::to_string(u.grid().K()) + "]");
  SpectralField out = u;
  out.for_each_mode([K_target](int k1, int k2, auto& c) {
    if (std::abs(k1) > K_target || std::abs(k2) > K_target) c = 0.0;
  });
  return out;
}

SpectralField resample(const SpectralField& u, const TorusGrid& target)
{
  SpectralField out(target);
  const TorusGrid& src = u.grid();
  out.for_each_mode([&](int k1, int k2, auto& c) {
    if (src.contains(k1, k2)) c = u(k1, k2);
  });
  return out;
}

}  // namespace wickflow
