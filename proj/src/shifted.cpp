#include "wickflow/shifted.hpp"

#include <cmath>
#include <string>

#include "wickflow/spectral.hpp"

namespace wickflow {

namespace {

// e^{-lambda dt} and (1 - e^{-lambda dt}) / lambda per retained mode
struct StepWeights
{
  StepWeights(const TorusGrid& g, double dt)
  {
    const int K = g.K();
    for (int k1 = -K; k1 <= K; ++k1)
      for (int k2 = -K; k2 <= K; ++k2) {
        const double lam = TorusGrid::eigenvalue(k1, k2);
        decay.push_back(std::exp(-lam * dt));
        phi1.push_back(-std::expm1(-lam * dt) / lam);
      }
  }
  std::vector<double> decay;
  std::vector<double> phi1;
};

SpectralField exp_euler(const SpectralField& Y, const SpectralField& F, const StepWeights& w)
{
  SpectralField out = Y;
  auto o = out.coeffs();
  auto f = F.coeffs();
  for (std::size_t n = 0; n < o.size(); ++n) o[n] = w.decay[n] * o[n] - w.phi1[n] * f[n];
  return out;
}

void require_tower(const WickTower& tower, const PolynomialSpec& P, const TorusGrid& g)
{
  if (tower.max_order() < P.max_wick_order())
    throw ConfigurationError("nonlinear_term: tower holds orders up to " + std::to_string(tower.max_order()) +
                             ", need " + std::to_string(P.max_wick_order()));
  if (!(tower.grid() == g)) throw ConfigurationError("nonlinear_term: tower lives on another grid");
  if (!g.supports_degree(P.max_wick_order()))
    throw ConfigurationError("nonlinear_term: grid cannot dealias degree " + std::to_string(P.max_wick_order()));
}

CounterTable dynamics_table(const TorusGrid& g, const SolverConfig& cfg)
{
  CounterTable t(g);
  return cfg.counterterm_scale == 1.0 ? t : t.with_stationary_value(cfg.counterterm_scale * t.c_C());
}

class Recorder
{
 public:
  Recorder(Trajectory& tr, const SolverConfig& cfg, const CounterTerm& c) : tr_(tr), cfg_(cfg), c_(c) {}

  void operator()(double t, const SpectralField& Y, const SpectralField& Zbar)
  {
    SpectralField X = Y + Zbar;
    const double res = (X - Y - Zbar).l2_norm() / std::max(1.0, X.l2_norm());
    tr_.reconstruction_residual = std::max(tr_.reconstruction_residual, res);
    tr_.times.push_back(t);
    tr_.observables.push_back(observables(X, c_));
    tr_.y_sup.push_back(to_real(Y).sup_norm());
    if (cfg_.keep_snapshots) {
      tr_.Y.push_back(Y);
      tr_.X.push_back(X);
    }
    tr_.y_final = Y;
    tr_.zbar_final = Zbar;
    tr_.x_final = std::move(X);
  }

 private:
  Trajectory& tr_;
  const SolverConfig& cfg_;
  CounterTerm c_;
};

void check_blowup(const RealField& Yr, const SpectralField& last, double t, const SolverConfig& cfg,
                  const Trajectory& tr)
{
  const double s = Yr.sup_norm();
  if (!(s <= cfg.blowup_threshold) || !Yr.all_finite()) throw BlowUpError(t, last, tr);
}

// Shared time loop; tower_at(t) supplies the Wick tower and shift(t) the field added to Y.
template <class TowerAt, class Shift>
Trajectory integrate(SpectralField Y, OUState& Z, const SolverConfig& cfg, const PolynomialSpec& P, TowerAt tower_at,
                     Shift shift)
{
  cfg.validate();
  const TorusGrid& g = Y.grid();
  const StepWeights w(g, cfg.dt);
  const double noise_dt = cfg.dt / cfg.noise_substeps;
  Trajectory tr;
  Recorder record(tr, cfg, counterterm_C(g));
  record(0.0, Y, shift(0.0));
  const long n_steps = cfg.steps();
  WickTower tower;
  SpectralField last = Y;
  for (long n = 0; n < n_steps; ++n) {
    const double t = n * cfg.dt;
    if (n % cfg.tower_refresh == 0) tower = tower_at(t);
    const RealField Yr = to_real(Y);
    check_blowup(Yr, last, t, cfg, tr);
    last = Y;
    Y = exp_euler(Y, to_spectral(nonlinear_term_pointwise(Yr, tower, P)), w);
    for (int s = 0; s < cfg.noise_substeps; ++s) ou_advance(Z, noise_dt, cfg.noise_amplitude);
    const long done = n + 1;
    if (done % cfg.record_every == 0 || done == n_steps) {
      check_blowup(to_real(Y), last, done * cfg.dt, cfg, tr);
      record(done * cfg.dt, Y, shift(done * cfg.dt));
    }
  }
  return tr;
}

}  // namespace

void SolverConfig::validate() const
{
  if (!(dt > 0.0) || !(horizon >= dt)) throw ConfigurationError("SolverConfig: need 0 < dt <= T");
  if (record_every < 1 || tower_refresh < 1 || noise_substeps < 1)
    throw ConfigurationError("SolverConfig: record_every, tower_refresh and noise_substeps must be >= 1");
  if (!(blowup_threshold > 0.0)) throw ConfigurationError("SolverConfig: blowup_threshold must be > 0");
  if (!(counterterm_scale >= 0.0)) throw ConfigurationError("SolverConfig: counterterm_scale must be >= 0");
  const double n = horizon / dt;
  if (std::abs(n - std::round(n)) > 1e-9 * n) throw ConfigurationError("SolverConfig: T must be a multiple of dt");
}

long SolverConfig::steps() const { return std::lround(horizon / dt); }

BlowUpError::BlowUpError(double time, SpectralField last_valid, Trajectory partial)
    : std::runtime_error("solution blew up at t = " + std::to_string(time)),
      time_(time),
      last_valid_(std::move(last_valid)),
      partial_(std::move(partial))
{
}

// ---------------------------------------------------------------------------
RealField nonlinear_term_pointwise(const RealField& Y, const WickTower& tower, const PolynomialSpec& P)
{
  require_tower(tower, P, Y.grid());
  const int top = P.max_wick_order();
  // coef[m][l] = (m + 1) a_{m+1} C(m, l), the weight of Y^l :Zbar^{m-l}:
  std::vector<std::vector<double>> coef(static_cast<std::size_t>(top) + 1);
  for (int m = 0; m <= top; ++m)
    for (int l = 0; l <= m; ++l) coef[m].push_back((m + 1) * P.coefficient(m + 1) * binomial(m, l));
  std::vector<const double*> T;
  for (int j = 0; j <= top; ++j) T.push_back(tower.orders[j].values().data());

  RealField out(Y.grid());
  auto o = out.values();
  auto y = Y.values();
  std::vector<double> ypow(static_cast<std::size_t>(top) + 1);
  for (std::size_t i = 0; i < o.size(); ++i) {
    ypow[0] = 1.0;
    for (int l = 1; l <= top; ++l) ypow[l] = ypow[l - 1] * y[i];
    double acc = 0.0;
    for (int m = 0; m <= top; ++m) {
      if (P.coefficient(m + 1) == 0.0) continue;
      for (int l = 0; l <= m; ++l) acc += coef[m][l] * ypow[l] * T[m - l][i];
    }
    o[i] = acc;
  }
  return out;
}

SpectralField nonlinear_term(const SpectralField& Y, const WickTower& tower, const PolynomialSpec& P)
{
  return to_spectral(nonlinear_term_pointwise(to_real(Y), tower, P));
}

SpectralField step(const SpectralField& Y, const WickTower& tower, double dt, const PolynomialSpec& P)
{
  if (!(dt > 0.0)) throw DomainError("step: dt must be > 0");
  return exp_euler(Y, nonlinear_term(Y, tower, P), StepWeights(Y.grid(), dt));
}

Trajectory solve(const SpectralField& y0, const SpectralField& z0, std::uint64_t seed, const SolverConfig& cfg,
                 const PolynomialSpec& P)
{
  if (!(y0.grid() == z0.grid())) throw ConfigurationError("solve: y0 and z0 live on different grids");
  const TorusGrid& g = y0.grid();
  const CounterTable table = dynamics_table(g, cfg);
  OUState Z = make_ou_state(SpectralField(g), seed);
  const int order = P.max_wick_order();
  return integrate(
      y0, Z, cfg, P, [&](double t) { return build_tower(Z.z, z0, t, table, order); },
      [&](double t) { return Z.z + apply_semigroup(z0, t); });
}

std::uint64_t alternative_initial_seed(std::uint64_t seed) { return derive_seed(seed, 0x5a31ULL); }

Trajectory solve_alternative_splitting(const SpectralField& z0, std::uint64_t seed, const SolverConfig& cfg,
                                       const PolynomialSpec& P, const std::optional<SpectralField>& z1_initial)
{
  const TorusGrid& g = z0.grid();
  SpectralField z1_0(g);
  if (z1_initial) {
    if (!(z1_initial->grid() == g)) throw ConfigurationError("solve_alternative_splitting: Z1(0) on another grid");
    z1_0 = *z1_initial;
  } else {
    Rng rng(alternative_initial_seed(seed));
    z1_0 = sample_stationary(g, rng);
  }
  const CounterTerm c = dynamics_table(g, cfg).stationary();
  OUState Z = make_ou_state(SpectralField(g), seed);
  const int order = P.max_wick_order();
  auto z1 = [&](double t) { return Z.z + apply_semigroup(z1_0, t); };
  return integrate(
      z0 - z1_0, Z, cfg, P, [&](double t) { return make_tower(z1(t), order, c); }, z1);
}

Trajectory stationary_solve(const SpectralField& eta, std::uint64_t seed, const SolverConfig& cfg,
                            const PolynomialSpec& P)
{
  return solve(eta, SpectralField(eta.grid()), seed, cfg, P);
}

std::vector<WickTower> tower_path(const SpectralField& z0, std::uint64_t seed, const SolverConfig& cfg, int max_order)
{
  cfg.validate();
  const CounterTable table = dynamics_table(z0.grid(), cfg);
  OUState Z = make_ou_state(SpectralField(z0.grid()), seed);
  const double noise_dt = cfg.dt / cfg.noise_substeps;
  std::vector<WickTower> out;
  const long n_steps = cfg.steps();
  for (long n = 0; n <= n_steps; ++n) {
    out.push_back(build_tower(Z.z, z0, n * cfg.dt, table, max_order));
    if (n == n_steps) break;
    for (int s = 0; s < cfg.noise_substeps; ++s) ou_advance(Z, noise_dt, cfg.noise_amplitude);
  }
  return out;
}

PicardResult picard_solve(const SpectralField& y0, const std::vector<WickTower>& towers, double dt,
                          const PolynomialSpec& P, double tol, int max_iter)
{
  if (towers.empty()) throw ConfigurationError("picard_solve: empty tower path");
  if (!(dt > 0.0)) throw DomainError("picard_solve: dt must be > 0");
  const StepWeights w(y0.grid(), dt);
  const std::size_t n = towers.size();

  PicardResult res;
  res.path.reserve(n);
  res.path.push_back(y0);
  for (std::size_t m = 1; m < n; ++m) res.path.push_back(apply_semigroup(y0, m * dt));

  int growth = 0;
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<SpectralField> F;
    F.reserve(n);
    for (std::size_t m = 0; m < n; ++m) F.push_back(nonlinear_term(res.path[m], towers[m], P));
    std::vector<SpectralField> next;
    next.reserve(n);
    next.push_back(y0);
    for (std::size_t m = 0; m + 1 < n; ++m) {
      SpectralField avg = F[m] + F[m + 1];
      avg *= 0.5;
      next.push_back(exp_euler(next.back(), avg, w));
    }
    double r = 0.0;
    for (std::size_t m = 0; m < n; ++m) r = std::max(r, (next[m] - res.path[m]).l2_norm());
    res.path = std::move(next);
    res.iterations = it;
    if (!std::isfinite(r)) throw HorizonTooLargeError("picard_solve: iterates diverged");
    if (!res.residuals.empty() && r > res.residuals.back())
      ++growth;
    else
      growth = 0;
    res.residuals.push_back(r);
    if (growth >= 3) throw HorizonTooLargeError("picard_solve: residual grew for 3 consecutive iterations");
    if (r < tol) return res;
  }
  throw HorizonTooLargeError("picard_solve: no convergence within " + std::to_string(max_iter) + " iterations");
}

}  // namespace wickflow
