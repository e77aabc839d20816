#include "wickflow/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "wickflow/besov.hpp"
#include "wickflow/errors.hpp"
#include "wickflow/gibbs.hpp"
#include "wickflow/ou.hpp"
#include "wickflow/parallel.hpp"
#include "wickflow/rng.hpp"
#include "wickflow/shifted.hpp"
#include "wickflow/spectral.hpp"
#include "wickflow/stats.hpp"

namespace wickflow::experiments {

using nlohmann::json;

bool Report::pass() const
{
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void Report::add(std::string check_name, double value, std::string condition, bool ok)
{
  checks.push_back(Check{std::move(check_name), value, std::move(condition), ok});
}

json Report::to_json() const
{
  json j;
  j["name"] = name;
  j["pass"] = pass();
  j["seconds"] = seconds;
  j["checks"] = json::array();
  for (const auto& c : checks) {
    json v = std::isfinite(c.value) ? json(c.value) : json(nullptr);
    j["checks"].push_back({{"name", c.name}, {"value", v}, {"condition", c.condition}, {"pass", c.pass}});
  }
  j["details"] = details;
  return j;
}

namespace {

class Stopwatch
{
 public:
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x)
{
  std::ostringstream os;
  os << x;
  return os.str();
}

std::string below(double tol) { return "< " + fmt(tol); }

/// max |f - ref| / max(1, max |ref|).
double scaled_residual(const RealField& f, const RealField& ref)
{
  return (f - ref).sup_norm() / std::max(1.0, ref.sup_norm());
}

double z_score(std::span<const double> x)
{
  const double se = stats::standard_error(x);
  const double m = stats::mean(x);
  if (se == 0.0) return m == 0.0 ? 0.0 : std::copysign(INFINITY, m);
  return m / se;
}

std::vector<double> log_spaced(double a, double b, int n)
{
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------

Report binomial_identity(const BinomialParams& p)
{
  Stopwatch sw;
  Report r;
  r.name = "binomial identity";
  Rng rng(p.seed);
  std::uniform_real_distribution<double> U(-p.range, p.range);
  double worst = 0.0;
  json per_order = json::array();
  std::vector<std::pair<double, double>> pts(p.cases);
  for (auto& st : pts) st = {U(rng), U(rng)};
  for (int n = 0; n <= p.max_order; ++n) {
    double m = 0.0;
    for (auto [s, t] : pts) m = std::max(m, binomial_identity_check(n, s, t));
    per_order.push_back(m);
    worst = std::max(worst, m);
  }
  r.add("max |P_n(s+t) - sum C(n,m) P_m(s) t^(n-m)|", worst, below(p.tolerance), worst < p.tolerance);
  r.details = {{"max_order", p.max_order}, {"cases", p.cases}, {"range", p.range}, {"per_order", per_order}};
  r.seconds = sw.seconds();
  return r;
}

Report conversion_identity(const ConversionParams& p)
{
  Stopwatch sw;
  Report r;
  r.name = "covariance conversion";
  const TorusGrid g(p.K);
  const CounterTable tab(g);
  double worst = 0.0;
  json per_time = json::array();
  for (double t : p.times) {
    double m = 0.0;
    for (int s = 0; s < p.samples; ++s) {
      OUState st = make_ou_state(SpectralField(g), derive_seed(p.seed, static_cast<std::uint64_t>(s)));
      ou_advance(st, t);
      const WickTower conv = convert_tower(tower_from_zero(st.z, t, tab, p.max_order), tab);
      const RealField zr = to_real(st.z);
      for (int n = 0; n <= p.max_order; ++n)
        m = std::max(m, scaled_residual(conv.orders[n], wick_power_pointwise(zr, n, tab.c_C())));
    }
    per_time.push_back({{"t", t}, {"c_t", tab.c_t(t)}, {"residual", m}});
    worst = std::max(worst, m);
  }
  r.add(":Z^n:_C vs converted :Z^n:_{C_t} tower", worst, below(p.tolerance), worst < p.tolerance);
  r.details = {{"K", p.K}, {"max_order", p.max_order}, {"samples", p.samples}, {"per_time", per_time}};
  r.seconds = sw.seconds();
  return r;
}

Report recombination_identity(const RecombinationParams& p)
{
  Stopwatch sw;
  Report r;
  r.name = "recombination";
  const TorusGrid g(p.K, std::max(3, p.max_order));
  const auto c = counterterm_C(g);
  Rng rng(p.seed);
  double worst = 0.0;
  for (int s = 0; s < p.samples; ++s) {
    const SpectralField u = sample_stationary(g, rng);
    const SpectralField z = sample_stationary(g, rng);
    const WickTower tz = make_tower(z, p.max_order, c);
    for (int n = 0; n <= p.max_order; ++n)
      worst = std::max(worst, relative_difference(recombine(u - z, tz, n), wick_power(u, n, c)));
  }
  r.add("recombine(u - z, tower(z), n) vs :u^n:", worst, below(p.tolerance), worst < p.tolerance);
  r.details = {{"K", p.K}, {"M", g.M()}, {"max_order", p.max_order}, {"samples", p.samples}, {"c", c.value}};
  r.seconds = sw.seconds();
  return r;
}

Report reconstruction_identity(const ReconstructionParams& p)
{
  Stopwatch sw;
  Report r;
  r.name = "reconstruction";
  const TorusGrid g(p.K, std::max(3, p.P.degree()));
  Rng rng(p.seed);
  const SpectralField z0 = sample_stationary(g, rng);
  SolverConfig cfg;
  cfg.dt = p.dt;
  cfg.horizon = p.T;
  cfg.record_every = 1;
  const Trajectory tr = solve(SpectralField(g), z0, derive_seed(p.seed, 1), cfg, p.P);
  r.add("max_t ||X - Y - Zbar|| / max(1, ||X||)", tr.reconstruction_residual, below(p.tolerance),
        tr.reconstruction_residual < p.tolerance);
  r.details = {{"K", p.K}, {"dt", p.dt}, {"T", p.T}, {"records", tr.times.size()}};
  r.seconds = sw.seconds();
  return r;
}

Report identities(const ExperimentConfig& c)
{
  Stopwatch sw;
  const PolynomialSpec P = c.polynomial_spec();
  const int top = 2 * P.N - 1;
  const std::uint64_t seed = c.ensemble.master_seed;
  std::vector<Report> parts;
  parts.push_back(binomial_identity({std::max(10, top), 1000, 5.0, 1e-10, derive_seed(seed, 1)}));
  ConversionParams cp;
  cp.K = c.grid.K;
  cp.max_order = std::max(5, top);
  cp.tolerance = 1e-10;
  cp.seed = derive_seed(seed, 2);
  parts.push_back(conversion_identity(cp));
  RecombinationParams rp;
  rp.K = c.grid.K;
  rp.max_order = std::max(5, top);
  rp.tolerance = 1e-10;
  rp.seed = derive_seed(seed, 3);
  parts.push_back(recombination_identity(rp));
  ReconstructionParams xp;
  xp.K = c.grid.K;
  xp.P = P;
  xp.tolerance = 1e-10;
  xp.seed = derive_seed(seed, 4);
  parts.push_back(reconstruction_identity(xp));

  Report r;
  r.name = "identities";
  r.details["suites"] = json::array();
  for (auto& part : parts) {
    for (auto& ch : part.checks) r.checks.push_back(ch);
    r.details["suites"].push_back(part.to_json());
  }
  r.seconds = sw.seconds();
  return r;
}

// ---------------------------------------------------------------------------

Report free_field_calibration(const FreeFieldParams& p)
{
  Stopwatch sw;
  Report r;
  r.name = "free-field calibration";
  r.details["K"] = json::array();
  for (int K : p.Ks) {
    const TorusGrid g(K);
    const double c = counterterm_C(g).value;
    Rng rng(derive_seed(p.seed, static_cast<std::uint64_t>(K)));
    std::vector<double> point(p.samples), spatial(p.samples);
    for (int s = 0; s < p.samples; ++s) {
      const RealField u = to_real(sample_stationary(g, rng));
      point[s] = u(0, 0) * u(0, 0);
      double acc = 0.0;
      for (double v : u.values()) acc += v * v;
      spatial[s] = acc / static_cast<double>(g.point_count());
    }
    const double zp = (stats::mean(point) - c) / stats::standard_error(point);
    const double zs = (stats::mean(spatial) - c) / stats::standard_error(spatial);
    r.add("K=" + std::to_string(K) + " |z| of u(0)^2 vs c_C", std::abs(zp), "<= 3", std::abs(zp) <= 3.0);
    r.add("K=" + std::to_string(K) + " |z| of mean u^2 vs c_C", std::abs(zs), "<= 3", std::abs(zs) <= 3.0);
    r.details["K"].push_back({{"K", K},
                              {"c_C", c},
                              {"point_mean", stats::mean(point)},
                              {"point_se", stats::standard_error(point)},
                              {"spatial_mean", stats::mean(spatial)},
                              {"spatial_se", stats::standard_error(spatial)}});
  }
  r.details["samples"] = p.samples;
  r.seconds = sw.seconds();
  return r;
}

Report gaussian_submodel(const GaussianSubmodelParams& p)
{
  Stopwatch sw;
  Report r;
  r.name = "gaussian submodel";
  const TorusGrid g(p.K);
  const auto c = counterterm_C(g);
  const PolynomialSpec P = PolynomialSpec::from_coefficients({0.0, 0.0, p.a2});
  const auto modes = observable_mode_list();
  auto expected = [&](std::pair<int, int> k) {
    return 1.0 / (2.0 * (TorusGrid::eigenvalue(k.first, k.second) + p.a2));
  };

  // Gibbs chain.
  std::vector<std::vector<double>> chain(modes.size());
  {
    Rng init_rng(derive_seed(p.seed, 1));
    ChainState s = make_chain(sample_stationary(g, init_rng), P, c, derive_seed(p.seed, 2));
    for (long n = 0; n < p.chain_steps; ++n) {
      pcn_step(s, p.rho, P, c);
      if (n < p.chain_burn_in) continue;
      for (std::size_t m = 0; m < modes.size(); ++m) chain[m].push_back(std::norm(s.phi(modes[m].first, modes[m].second)));
    }
    r.details["chain_acceptance"] = s.acceptance_rate();
  }

  // Langevin dynamics of nu: drift A X - (1/2) :p(X):.
  std::vector<std::vector<double>> spde(modes.size());
  {
    SolverConfig cfg;
    cfg.dt = p.spde_dt;
    cfg.horizon = p.spde_T;
    cfg.record_every = static_cast<int>(std::lround(p.spde_record / p.spde_dt));
    const Trajectory tr = stationary_solve(SpectralField(g), derive_seed(p.seed, 3), cfg, P.scaled(0.5));
    for (std::size_t n = 0; n < tr.times.size(); ++n) {
      if (tr.times[n] < p.spde_burn_in) continue;
      for (std::size_t m = 0; m < modes.size(); ++m) spde[m].push_back(tr.observables[n].modes[m]);
    }
  }

  double worst_chain = 0.0, worst_spde = 0.0;
  r.details["modes"] = json::array();
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const double e = expected(modes[m]);
    const double se_c = stats::batch_means_error(chain[m], 50);
    const double se_s = stats::batch_means_error(spde[m], 50);
    const double zc = (stats::mean(chain[m]) - e) / se_c;
    const double zs = (stats::mean(spde[m]) - e) / se_s;
    worst_chain = std::max(worst_chain, std::abs(zc));
    worst_spde = std::max(worst_spde, std::abs(zs));
    r.details["modes"].push_back({{"k", {modes[m].first, modes[m].second}},
                                  {"expected", e},
                                  {"chain_mean", stats::mean(chain[m])},
                                  {"chain_se", se_c},
                                  {"spde_mean", stats::mean(spde[m])},
                                  {"spde_se", se_s}});
  }
  r.add("chain max |z| over |k|inf <= 2", worst_chain, "<= 3", worst_chain <= 3.0);
  r.add("dynamics max |z| over |k|inf <= 2", worst_spde, "<= 3", worst_spde <= 3.0);
  r.details["a2"] = p.a2;
  r.details["K"] = p.K;
  r.seconds = sw.seconds();
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct DriftSample
{
  std::vector<double> at0;
  std::vector<double> coarse;  // O(T) at dt
  std::vector<double> fine;    // O(T) at dt / 2
  std::vector<double> broken_coarse;
  std::vector<double> broken_fine;
  double acceptance = 0.0;
  double rho = 0.0;
};

std::vector<double> final_observables(const Trajectory& tr) { return tr.observables.back().flatten(); }

struct DriftTable
{
  json rows = json::array();
  double max_abs_z = 0.0;
  double wick2_z = 0.0;
};

DriftTable drift_table(const std::vector<DriftSample>& runs, bool broken)
{
  const auto names = observable_names();
  DriftTable out;
  const std::size_t n = runs.size();
  for (std::size_t o = 0; o < names.size(); ++o) {
    std::vector<double> d1(n), d2(n), rich(n), m0(n), mT(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = broken ? runs[i].broken_coarse : runs[i].coarse;
      const auto& f = broken ? runs[i].broken_fine : runs[i].fine;
      d1[i] = c[o] - runs[i].at0[o];
      d2[i] = f[o] - runs[i].at0[o];
      rich[i] = 2.0 * d2[i] - d1[i];
      m0[i] = runs[i].at0[o];
      mT[i] = f[o];
    }
    const double z1 = z_score(d1), z2 = z_score(d2), zr = z_score(rich);
    out.max_abs_z = std::max({out.max_abs_z, std::abs(z1), std::abs(z2), std::abs(zr)});
    if (o == 0) out.wick2_z = z2;
    out.rows.push_back({{"observable", names[o]},
                        {"mean_0", stats::mean(m0)},
                        {"mean_T", stats::mean(mT)},
                        {"drift_dt", stats::mean(d1)},
                        {"se_dt", stats::standard_error(d1)},
                        {"z_dt", z1},
                        {"drift_dt_half", stats::mean(d2)},
                        {"se_dt_half", stats::standard_error(d2)},
                        {"z_dt_half", z2},
                        {"z_richardson", zr}});
  }
  return out;
}

}  // namespace

Report invariance(const InvarianceParams& p)
{
  Stopwatch sw;
  Report r;
  r.name = "invariance";
  const TorusGrid g(p.K, std::max(3, p.P.degree()));
  const auto c = counterterm_C(g);
  const PolynomialSpec dyn = p.P.scaled(0.5);

  SolverConfig coarse;
  coarse.dt = p.dt;
  coarse.horizon = p.T;
  coarse.record_every = static_cast<int>(coarse.steps());
  coarse.noise_substeps = 2;
  SolverConfig fine = coarse;
  fine.dt = p.dt / 2.0;
  fine.record_every = static_cast<int>(fine.steps());
  fine.noise_substeps = 1;

  std::vector<DriftSample> runs(p.n_traj);
  parallel_for(p.n_traj, p.threads, [&](int i) {
    const std::uint64_t s = derive_seed(p.seed, static_cast<std::uint64_t>(i));
    Rng init_rng(derive_seed(s, 1));
    ChainState chain = make_chain(sample_stationary(g, init_rng), p.P, c, derive_seed(s, 2));
    const double rho = tune_rho(chain, p.rho0, p.P, c, p.pilot_steps);
    chain.accepted = chain.proposed = 0;
    for (long n = 0; n < p.burn_in; ++n) pcn_step(chain, rho, p.P, c);
    if (chain.acceptance_rate() < 0.01)
      throw ChainWarmupError("invariance: chain " + std::to_string(i) + " accepted " +
                             std::to_string(chain.acceptance_rate()) + " of proposals during warm-up");
    const SpectralField& eta = chain.phi;
    DriftSample& d = runs[i];
    d.rho = rho;
    d.acceptance = chain.acceptance_rate();
    d.at0 = observables(eta, c).flatten();
    const std::uint64_t noise = derive_seed(s, 3);
    d.coarse = final_observables(stationary_solve(eta, noise, coarse, dyn));
    d.fine = final_observables(stationary_solve(eta, noise, fine, dyn));
    if (p.negative_control) {
      SolverConfig bc = coarse, bf = fine;
      bc.counterterm_scale = bf.counterterm_scale = 2.0;
      d.broken_coarse = final_observables(stationary_solve(eta, noise, bc, dyn));
      d.broken_fine = final_observables(stationary_solve(eta, noise, bf, dyn));
    }
  });

  const DriftTable ok = drift_table(runs, false);
  r.add("max |z| of paired drift (dt, dt/2, Richardson)", ok.max_abs_z, "<= 3", ok.max_abs_z <= 3.0);
  r.details["observables"] = ok.rows;
  if (p.negative_control) {
    const DriftTable bad = drift_table(runs, true);
    r.add("negative control c -> 2c: |z| of int :phi^2: drift", std::abs(bad.wick2_z), "> 3",
          std::abs(bad.wick2_z) > 3.0);
    r.details["negative_control"] = {{"max_abs_z", bad.max_abs_z}, {"observables", bad.rows}};
  }
  std::vector<double> acc, rhos;
  for (const auto& d : runs) {
    acc.push_back(d.acceptance);
    rhos.push_back(d.rho);
  }
  r.details["chain"] = {{"mean_acceptance", stats::mean(acc)},
                        {"min_acceptance", *std::min_element(acc.begin(), acc.end())},
                        {"mean_rho", stats::mean(rhos)}};
  r.details["K"] = p.K;
  r.details["dt"] = p.dt;
  r.details["T"] = p.T;
  r.details["n_traj"] = p.n_traj;
  r.seconds = sw.seconds();
  return r;
}

Report equivalence(const EquivalenceParams& p)
{
  Stopwatch sw;
  Report r;
  r.name = "splitting equivalence";
  const TorusGrid g(p.K, std::max(3, p.P.degree()));
  Rng rng(p.seed);
  const SpectralField z0 = sample_stationary(g, rng);
  const SpectralField z1 = sample_stationary(g, rng);
  const std::uint64_t noise = derive_seed(p.seed, 1);
  const double noise_dt = *std::min_element(p.dts.begin(), p.dts.end());

  auto config = [&](double dt, int refresh) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.horizon = p.T;
    cfg.record_every = 1000000;
    cfg.tower_refresh = refresh;
    cfg.noise_substeps = static_cast<int>(std::lround(dt / noise_dt));
    if (std::abs(cfg.noise_substeps * noise_dt - dt) > 1e-12 * dt)
      throw ConfigurationError("equivalence: step sizes must be integer multiples of the smallest");
    return cfg;
  };
  struct Gap
  {
    double x = 0.0;
    double relation = 0.0;
  };
  auto gap = [&](double dt, int refresh) {
    const SolverConfig cfg = config(dt, refresh);
    const Trajectory a = solve(SpectralField(g), z0, noise, cfg, p.P);
    const Trajectory b = solve_alternative_splitting(z0, noise, cfg, p.P, z1);
    const SpectralField shift = apply_semigroup(z1 - z0, p.T);
    return Gap{relative_difference(*a.x_final, *b.x_final), relative_difference(*a.y_final, *b.y_final + shift)};
  };

  double exact = 0.0;
  std::vector<double> ldt, lx, lrel;
  json rows = json::array();
  for (double dt : p.dts) {
    const Gap e = gap(dt, 1);
    const Gap s = gap(dt, p.tower_refresh);
    exact = std::max({exact, e.x, e.relation});
    ldt.push_back(std::log(dt));
    lx.push_back(std::log(s.x));
    lrel.push_back(std::log(s.relation));
    rows.push_back({{"dt", dt}, {"exact_refresh_gap", e.x}, {"gap", s.x}, {"relation_gap", s.relation}});
  }
  const double order_x = stats::linear_fit(ldt, lx).slope;
  const double order_rel = stats::linear_fit(ldt, lrel).slope;
  r.add("tower refreshed every step: max relative gap", exact, "< 1e-10", exact < 1e-10);
  r.add("fitted order of ||X - X1|| (refresh " + std::to_string(p.tower_refresh) + ")", order_x,
        ">= " + fmt(p.min_order), order_x >= p.min_order);
  r.add("fitted order of ||Y - Y1 - e^{TA}(Z1(0) - z)||", order_rel, ">= " + fmt(p.min_order),
        order_rel >= p.min_order);
  r.details = {{"K", p.K}, {"T", p.T}, {"noise_dt", noise_dt}, {"tower_refresh", p.tower_refresh}, {"rows", rows}};
  r.seconds = sw.seconds();
  return r;
}

Report linear_convergence(const LinearConvergenceParams& p)
{
  Stopwatch sw;
  Report r;
  r.name = "linear scheme convergence";
  const TorusGrid g(p.K);
  const PolynomialSpec P = PolynomialSpec::from_coefficients({0.0, 0.0, p.a2});
  SpectralField y0(g);
  y0.set_mode(0, 0, 1.0);
  y0.set_mode(1, 0, {0.5, -0.25});
  y0.set_mode(2, 1, {0.1, 0.2});
  std::vector<double> err;
  for (double dt : p.dts) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.horizon = p.T;
    cfg.record_every = 1000000;
    cfg.noise_amplitude = 0.0;
    const Trajectory tr = solve(y0, SpectralField(g), 1, cfg, P);
    double e = 0.0;
    for (auto [k1, k2] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{2, 1}}) {
      const auto exact = y0(k1, k2) * std::exp(-(TorusGrid::eigenvalue(k1, k2) + 2.0 * p.a2) * p.T);
      e = std::max(e, std::abs((*tr.y_final)(k1, k2) - exact));
    }
    err.push_back(e);
  }
  json ratios = json::array();
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double q = err[i - 1] / err[i];
    ratios.push_back(q);
    r.add("error ratio dt=" + fmt(p.dts[i - 1]) + " -> " + fmt(p.dts[i]), q, "in [1.7, 2.3]", q >= 1.7 && q <= 2.3);
  }
  r.details = {{"dts", p.dts}, {"errors", err}, {"ratios", ratios}, {"a2", p.a2}, {"T", p.T}};
  r.seconds = sw.seconds();
  return r;
}

// ---------------------------------------------------------------------------

Report regularity(const RegularityParams& p)
{
  Stopwatch sw;
  Report r;
  r.name = "regularity bands";
  const TorusGrid g(p.K, std::max(3, p.P.degree()));
  const DyadicPartition part(g);
  const auto c = counterterm_C(g);
  SolverConfig cfg;
  cfg.dt = p.dt;
  cfg.horizon = p.T;
  cfg.record_every = static_cast<int>(cfg.steps());
  std::vector<double> az(p.runs), az2(p.runs), ay(p.runs);
  parallel_for(p.runs, p.threads, [&](int i) {
    const std::uint64_t s = derive_seed(p.seed, static_cast<std::uint64_t>(i));
    Rng rng(derive_seed(s, 1));
    const SpectralField z0 = sample_stationary(g, rng);
    const Trajectory tr = solve(SpectralField(g), z0, derive_seed(s, 2), cfg, p.P);
    az[i] = regularity_estimate(*tr.zbar_final, part).alpha;
    az2[i] = regularity_estimate(wick_power(*tr.zbar_final, 2, c), part).alpha;
    ay[i] = regularity_estimate(*tr.y_final, part).alpha;
  });
  auto fraction = [&](const std::vector<double>& v, auto pred) {
    return static_cast<double>(std::count_if(v.begin(), v.end(), pred)) / static_cast<double>(v.size());
  };
  const double fz = fraction(az, [&](double a) { return a >= p.z_low && a <= p.z_high; });
  const double fy = fraction(ay, [&](double a) { return a >= p.y_low; });
  r.add("fraction of runs with alpha(Z(T)) in [" + fmt(p.z_low) + ", " + fmt(p.z_high) + "]", fz,
        ">= " + fmt(p.fraction), fz >= p.fraction);
  r.add("fraction of runs with alpha(Y(T)) >= " + fmt(p.y_low), fy, ">= " + fmt(p.fraction), fy >= p.fraction);
  auto summary = [](const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return json{{"mean", stats::mean(v)}, {"sd", std::sqrt(stats::variance(v))}, {"min", *lo}, {"max", *hi}};
  };
  r.details = {{"K", p.K},
               {"J", part.J()},
               {"T", p.T},
               {"dt", p.dt},
               {"runs", p.runs},
               {"alpha_Z", summary(az)},
               {"alpha_Z2", summary(az2)},
               {"alpha_Y", summary(ay)}};
  r.seconds = sw.seconds();
  return r;
}

Report besov_machinery(const BesovParams& p)
{
  Stopwatch sw;
  Report r;
  r.name = "besov machinery";
  const TorusGrid g(p.K);
  const DyadicPartition part(g);
  Rng rng(p.seed);

  const double sum_res = part.sum_to_one_residual();
  r.add("partition sum-to-one residual", sum_res, "< 1e-12", sum_res < 1e-12);
  double overlap = 0.0;
  for (int i = -1; i <= part.top(); ++i)
    for (int j = i + 2; j <= part.top(); ++j) overlap = std::max(overlap, part.overlap(i, j));
  r.add("overlap of blocks with |i - j| > 1", overlap, "== 0", overlap == 0.0);

  std::vector<SpectralField> samples;
  for (int s = 0; s < p.samples; ++s) samples.push_back(sample_stationary(g, rng));

  double recon = 0.0;
  for (const auto& u : samples) {
    SpectralField sum(g);
    for (const auto& b : part.blocks(u)) sum = sum + b;
    recon = std::max(recon, (sum - u).l2_norm() / u.l2_norm());
  }
  r.add("block reconstruction residual", recon, "< 1e-12", recon < 1e-12);

  // Schauder ratio over t from (2/K)^2 to 1.
  const auto t_ratio = log_spaced(4.0 / (p.K * p.K), 1.0, 17);
  double ratio = 0.0;
  for (const auto& u : samples) ratio = std::max(ratio, schauder_check(u, p.alpha, p.delta, t_ratio, part));
  r.add("max Schauder ratio t^{d/2} ||e^{tA}u||_{a+d} / ||u||_a", ratio, "<= " + fmt(p.max_ratio),
        ratio <= p.max_ratio);

  // Small-t divergence rate of ||e^{tA} u||_{B^{a+d}_{2,inf}}, averaged over samples.
  const auto t_slope = log_spaced(4.0 / (p.K * p.K), 16.0 / (p.K * p.K), 9);
  std::vector<double> lt, mean_log(t_slope.size(), 0.0), per_sample;
  for (double t : t_slope) lt.push_back(std::log(t));
  for (const auto& u : samples) {
    std::vector<double> ln;
    for (std::size_t i = 0; i < t_slope.size(); ++i) {
      const double v = std::log(besov_norm(apply_semigroup(u, t_slope[i]), BesovSpec{p.alpha + p.delta, 2.0, kInf, 0.0}, part));
      mean_log[i] += v / static_cast<double>(samples.size());
      ln.push_back(v);
    }
    per_sample.push_back(stats::linear_fit(lt, ln).slope);
  }
  const double slope = stats::linear_fit(lt, mean_log).slope;
  const double lo = -p.delta / 2.0 - p.slope_halfwidth, hi = -p.delta / 2.0 + p.slope_halfwidth;
  r.add("small-t log-slope of ||e^{tA}u||_{a+d}", slope, "in [" + fmt(lo) + ", " + fmt(hi) + "]",
        slope >= lo && slope <= hi);
  auto [mn, mx] = std::minmax_element(per_sample.begin(), per_sample.end());
  r.details = {{"K", p.K},
               {"alpha", p.alpha},
               {"delta", p.delta},
               {"samples", p.samples},
               {"slope_t_range", {t_slope.front(), t_slope.back()}},
               {"per_sample_slope", {{"mean", stats::mean(per_sample)}, {"min", *mn}, {"max", *mx}}}};
  r.seconds = sw.seconds();
  return r;
}

Report wick_convergence(const WickConvergenceParams& p)
{
  Stopwatch sw;
  Report r;
  r.name = "wick-power convergence";
  std::vector<int> Ks = p.Ks;
  std::sort(Ks.begin(), Ks.end());
  const int Kmax = 2 * Ks.back();
  const TorusGrid g(Kmax);
  const DyadicPartition part(g);
  std::vector<int> levels = Ks;
  levels.push_back(Kmax);
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<double> c;
  for (int K : levels) c.push_back(counterterm_C(TorusGrid(K)).value);

  Rng rng(p.seed);
  const BesovSpec spec{p.alpha, kInf, kInf, 0.0};
  std::vector<std::vector<double>> d(Ks.size());
  int monotone = 0;
  for (int s = 0; s < p.samples; ++s) {
    const SpectralField phi = sample_stationary(g, rng);
    std::vector<SpectralField> w;
    for (std::size_t l = 0; l < levels.size(); ++l)
      w.push_back(wick_power(truncate(phi, levels[l]), 2, CounterTerm::fixed(c[l])));
    auto level = [&](int K) { return std::find(levels.begin(), levels.end(), K) - levels.begin(); };
    bool ok = true;
    for (std::size_t i = 0; i < Ks.size(); ++i) {
      d[i].push_back(besov_norm(w[level(Ks[i])] - w[level(2 * Ks[i])], spec, part));
      if (i > 0 && !(d[i].back() < d[i - 1].back())) ok = false;
    }
    monotone += ok;
  }
  const double frac = static_cast<double>(monotone) / p.samples;
  r.add("fraction of samples with ||:phi_K^2: - :phi_2K^2:|| decreasing in K", frac, ">= " + fmt(p.fraction),
        frac >= p.fraction);
  json means = json::array();
  for (std::size_t i = 0; i < Ks.size(); ++i)
    means.push_back({{"K", Ks[i]}, {"mean", stats::mean(d[i])}, {"se", stats::standard_error(d[i])}});
  r.details = {{"Ks", Ks}, {"grid_K", Kmax}, {"alpha", p.alpha}, {"samples", p.samples}, {"distance", means}};
  r.seconds = sw.seconds();
  return r;
}

}  // namespace wickflow::experiments
