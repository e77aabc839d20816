#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>

#include "wickflow/errors.hpp"
#include "wickflow/experiments.hpp"
#include "wickflow/gibbs.hpp"
#include "wickflow/io.hpp"
#include "wickflow/ou.hpp"
#include "wickflow/parallel.hpp"
#include "wickflow/rng.hpp"
#include "wickflow/shifted.hpp"
#include "wickflow/stats.hpp"

namespace wickflow::experiments {

using nlohmann::json;
namespace fs = std::filesystem;

ExperimentConfig defaults_for(const std::string& command)
{
  ExperimentConfig c;
  if (command == "invariance") {
    c.grid.K = 10;
    c.solver.dt = 5e-4;
    c.solver.T = 0.5;
    c.ensemble.n_traj = 256;
    c.sampler.burn_in = 1000;
    c.sampler.n_steps = 1200;
  } else if (command == "regularity") {
    c.grid.K = 16;
    c.ensemble.n_traj = 100;
  } else if (command == "equivalence") {
    c.solver.T = 0.2;
  } else if (command == "wick-convergence") {
    c.grid.K = 16;
    c.ensemble.n_traj = 200;
  }
  return c;
}

json summary(const Report& r, const ExperimentConfig& c)
{
  json j = r.to_json();
  j["config"] = config_to_json(c);
  j["version"] = version_string();
  return j;
}

namespace {

std::vector<std::string> csv_header(const std::string& first)
{
  std::vector<std::string> h{first};
  if (first == "traj") h.push_back("t");
  for (const auto& n : observable_names()) h.push_back(n);
  return h;
}

}  // namespace

SimulateResult simulate(const ExperimentConfig& c)
{
  const auto start = std::chrono::steady_clock::now();
  c.validate();
  const TorusGrid g = c.torus();
  const PolynomialSpec P = c.polynomial_spec();
  SolverConfig cfg = c.solver_config();
  cfg.keep_snapshots = c.wants("wck1");
  const int n = c.ensemble.n_traj;

  std::vector<Trajectory> runs(n);
  parallel_for(n, c.threads, [&](int i) {
    const std::uint64_t s = derive_seed(c.ensemble.master_seed, static_cast<std::uint64_t>(i));
    SpectralField z0(g);
    if (c.solver.initial == "free_field") {
      Rng rng(derive_seed(s, 1));
      z0 = sample_stationary(g, rng);
    }
    runs[i] = solve(SpectralField(g), z0, s, cfg, P);
  });

  SimulateResult out;
  out.report.name = "simulate";
  const fs::path dir = c.output.dir;
  if (c.wants("csv") || c.wants("wck1")) fs::create_directories(dir);
  if (c.wants("csv")) {
    auto header = csv_header("traj");
    header.push_back("y_sup");
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < n; ++i) {
      const Trajectory& tr = runs[i];
      for (std::size_t k = 0; k < tr.times.size(); ++k) {
        std::vector<double> row{static_cast<double>(i), tr.times[k]};
        for (double v : tr.observables[k].flatten()) row.push_back(v);
        row.push_back(tr.y_sup[k]);
        rows.push_back(std::move(row));
      }
    }
    const fs::path f = dir / "simulate_observables.csv";
    io::write_csv(f, header, rows);
    out.files.push_back(f.string());
  }
  if (c.wants("wck1")) {
    for (int i = 0; i < n; ++i) {
      const fs::path f = dir / ("simulate_traj" + std::to_string(i) + ".wck1");
      io::write_snapshots(f, runs[i].X);
      out.files.push_back(f.string());
    }
  }

  double recon = 0.0, ysup = 0.0;
  for (const auto& tr : runs) {
    recon = std::max(recon, tr.reconstruction_residual);
    ysup = std::max(ysup, *std::max_element(tr.y_sup.begin(), tr.y_sup.end()));
  }
  out.report.add("max reconstruction residual ||X - Y - Zbar||", recon, "< 1e-12", recon < 1e-12);
  out.report.details = {{"trajectories", n}, {"records", runs.front().times.size()}, {"max_y_sup", ysup},
                        {"files", out.files}};
  out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SimulateResult gibbs(const ExperimentConfig& c)
{
  const auto start = std::chrono::steady_clock::now();
  c.validate();
  const TorusGrid g = c.torus();
  const PolynomialSpec P = c.polynomial_spec();
  const auto cc = counterterm_C(g);
  const std::uint64_t seed = c.ensemble.master_seed;

  Rng init_rng(derive_seed(seed, 1));
  ChainState state = make_chain(sample_stationary(g, init_rng), P, cc, derive_seed(seed, 2));
  const double rho = tune_rho(state, c.sampler.rho, P, cc, 200);
  state.accepted = state.proposed = 0;
  ChainOptions opt{c.sampler.n_steps, c.sampler.burn_in, c.sampler.thinning, rho, true};
  const ChainRecord rec = run_chain(state, opt, P, cc);
  if (rec.acceptance < 0.01) throw ChainWarmupError("gibbs: " + rec.warning);

  SimulateResult out;
  out.report.name = "gibbs";
  const fs::path dir = c.output.dir;
  if (c.wants("csv") || c.wants("wck1")) fs::create_directories(dir);

  const auto modes = observable_mode_list();
  std::vector<std::vector<double>> series(observable_names().size() + 1);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < rec.samples.size(); ++k) {
    const auto obs = observables(rec.samples[k], cc, true);
    std::vector<double> row{static_cast<double>(k)};
    const auto flat = obs.flatten();
    for (std::size_t o = 0; o < flat.size(); ++o) series[o].push_back(flat[o]);
    series.back().push_back(obs.besov);
    row.insert(row.end(), flat.begin(), flat.end());
    row.push_back(obs.besov);
    rows.push_back(std::move(row));
  }
  if (c.wants("csv")) {
    auto header = csv_header("sample");
    header.push_back("besov_m0.1");
    const fs::path f = dir / "gibbs_samples.csv";
    io::write_csv(f, header, rows);
    out.files.push_back(f.string());
  }
  if (c.wants("wck1")) {
    const fs::path f = dir / "gibbs_samples.wck1";
    io::write_snapshots(f, rec.samples);
    out.files.push_back(f.string());
  }

  json means = json::array();
  const auto names = observable_names();
  for (std::size_t o = 0; o < names.size(); ++o) {
    const auto& v = series[o];
    means.push_back({{"observable", names[o]},
                     {"mean", stats::mean(v)},
                     {"se", v.size() >= 64 ? stats::batch_means_error(v) : stats::standard_error(v)}});
  }
  out.report.add("acceptance rate", rec.acceptance, ">= 0.01", rec.acceptance >= 0.01);
  out.report.details = {{"rho", rho},         {"acceptance", rec.acceptance}, {"iat_wick2", rec.iat},
                        {"warning", rec.warning}, {"samples", rec.samples.size()}, {"means", means},
                        {"files", out.files}};
  out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

Report invariance(const ExperimentConfig& c)
{
  c.validate();
  InvarianceParams p;
  p.K = c.grid.K;
  p.P = c.polynomial_spec();
  p.dt = c.solver.dt;
  p.T = c.solver.T;
  p.n_traj = c.ensemble.n_traj;
  p.burn_in = c.sampler.burn_in;
  p.rho0 = c.sampler.rho;
  p.threads = c.threads;
  p.seed = c.ensemble.master_seed;
  return invariance(p);
}

Report regularity(const ExperimentConfig& c)
{
  c.validate();
  RegularityParams p;
  p.K = c.grid.K;
  p.P = c.polynomial_spec();
  p.runs = c.ensemble.n_traj;
  p.dt = c.solver.dt;
  p.T = c.solver.T;
  p.threads = c.threads;
  p.seed = c.ensemble.master_seed;
  return regularity(p);
}

Report equivalence(const ExperimentConfig& c)
{
  c.validate();
  EquivalenceParams p;
  p.K = c.grid.K;
  p.P = c.polynomial_spec();
  p.dts = {4.0 * c.solver.dt, 2.0 * c.solver.dt, c.solver.dt};
  p.T = c.solver.T;
  p.tower_refresh = std::max(2, c.solver.tower_refresh);
  p.seed = c.ensemble.master_seed;
  return equivalence(p);
}

Report wick_convergence(const ExperimentConfig& c)
{
  c.validate();
  if (c.grid.K < 4 || c.grid.K % 4 != 0)
    throw ConfigurationError("wick-convergence: grid.K must be a positive multiple of 4");
  WickConvergenceParams p;
  p.Ks = {c.grid.K / 4, c.grid.K / 2, c.grid.K};
  p.samples = c.ensemble.n_traj;
  p.seed = c.ensemble.master_seed;
  return wick_convergence(p);
}

}  // namespace wickflow::experiments
