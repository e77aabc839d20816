#include "wickflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "wickflow/errors.hpp"

#ifndef WICKFLOW_GIT_DESCRIBE
#define WICKFLOW_GIT_DESCRIBE "unknown"
#endif
#ifndef WICKFLOW_VERSION
#define WICKFLOW_VERSION "0.0.0"
#endif

namespace wickflow {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed)
{
  if (!j.is_object()) throw ConfigurationError("config: '" + where + "' must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw ConfigurationError("config: unknown key '" + where + "." + key + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out)
{
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

void ExperimentConfig::validate() const
{
  if (grid.K < 0) throw ConfigurationError("config: grid.K must be >= 0");
  if (grid.degree < 0) throw ConfigurationError("config: grid.degree must be >= 0");
  (void)polynomial_spec();
  if (grid.degree != 0 && grid.degree < polynomial_spec().degree() - 1)
    throw ConfigurationError("config: grid.degree cannot dealias the nonlinearity");
  (void)torus();
  solver_config().validate();
  if (solver.initial != "zero" && solver.initial != "free_field")
    throw ConfigurationError("config: solver.initial must be 'zero' or 'free_field'");
  if (!(sampler.rho > 0.0 && sampler.rho <= 1.0)) throw ConfigurationError("config: sampler.rho must lie in (0, 1]");
  if (sampler.n_steps <= sampler.burn_in) throw ConfigurationError("config: sampler.n_steps must exceed burn_in");
  if (sampler.burn_in < 0 || sampler.thinning < 1) throw ConfigurationError("config: bad burn_in or thinning");
  if (ensemble.n_traj < 1) throw ConfigurationError("config: ensemble.n_traj must be >= 1");
  for (const auto& f : output.formats) {
    if (f != "csv" && f != "wck1" && f != "json") throw ConfigurationError("config: unknown output format '" + f + "'");
  }
  if (threads < 0) throw ConfigurationError("config: threads must be >= 0");
}

PolynomialSpec ExperimentConfig::polynomial_spec() const { return PolynomialSpec::from_coefficients(polynomial.a); }

int ExperimentConfig::grid_degree() const
{
  if (grid.degree > 0) return grid.degree;
  return std::max(3, polynomial_spec().degree());
}

TorusGrid ExperimentConfig::torus() const { return TorusGrid(grid.K, grid_degree()); }

SolverConfig ExperimentConfig::solver_config() const
{
  SolverConfig s;
  s.dt = solver.dt;
  s.horizon = solver.T;
  s.record_every = solver.record_every;
  s.tower_refresh = solver.tower_refresh;
  return s;
}

bool ExperimentConfig::wants(const std::string& format) const
{
  return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c)
{
  check_keys(j, "config", {"grid", "polynomial", "solver", "sampler", "ensemble", "output", "threads"});
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    check_keys(g, "grid", {"K", "degree"});
    read(g, "K", c.grid.K);
    read(g, "degree", c.grid.degree);
  }
  if (j.contains("polynomial")) {
    const auto& p = j["polynomial"];
    check_keys(p, "polynomial", {"N", "a"});
    read(p, "a", c.polynomial.a);
    if (p.contains("N")) {
      int N = 0;
      read(p, "N", N);
      const auto& a = c.polynomial.a;
      if (N < 1 || static_cast<int>(a.size()) < 2 * N + 1)
        throw ConfigurationError("config: polynomial.a needs 2N + 1 coefficients");
      if (!(a[2 * N] > 0.0)) throw ConfigurationError("config: polynomial leading coefficient a_{2N} must be > 0");
      for (std::size_t n = 2 * N + 1; n < a.size(); ++n)
        if (a[n] != 0.0) throw ConfigurationError("config: polynomial.a has terms above degree 2N");
    }
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    check_keys(s, "solver", {"dt", "T", "record_every", "tower_refresh", "initial"});
    read(s, "dt", c.solver.dt);
    read(s, "T", c.solver.T);
    read(s, "record_every", c.solver.record_every);
    read(s, "tower_refresh", c.solver.tower_refresh);
    read(s, "initial", c.solver.initial);
  }
  if (j.contains("sampler")) {
    const auto& s = j["sampler"];
    check_keys(s, "sampler", {"rho", "n_steps", "burn_in", "thinning"});
    read(s, "rho", c.sampler.rho);
    read(s, "n_steps", c.sampler.n_steps);
    read(s, "burn_in", c.sampler.burn_in);
    read(s, "thinning", c.sampler.thinning);
  }
  if (j.contains("ensemble")) {
    const auto& e = j["ensemble"];
    check_keys(e, "ensemble", {"n_traj", "master_seed"});
    read(e, "n_traj", c.ensemble.n_traj);
    read(e, "master_seed", c.ensemble.master_seed);
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    check_keys(o, "output", {"dir", "formats"});
    read(o, "dir", c.output.dir);
    read(o, "formats", c.output.formats);
  }
  read(j, "threads", c.threads);
  return c;
}

json config_to_json(const ExperimentConfig& c)
{
  json j;
  j["grid"] = {{"K", c.grid.K}, {"degree", c.grid.degree}};
  std::vector<double> a = c.polynomial.a;
  while (!a.empty() && a.back() == 0.0) a.pop_back();
  j["polynomial"] = {{"N", static_cast<int>(a.size()) / 2}, {"a", c.polynomial.a}};
  j["solver"] = {{"dt", c.solver.dt},
                 {"T", c.solver.T},
                 {"record_every", c.solver.record_every},
                 {"tower_refresh", c.solver.tower_refresh},
                 {"initial", c.solver.initial}};
  j["sampler"] = {{"rho", c.sampler.rho},
                  {"n_steps", c.sampler.n_steps},
                  {"burn_in", c.sampler.burn_in},
                  {"thinning", c.sampler.thinning}};
  j["ensemble"] = {{"n_traj", c.ensemble.n_traj}, {"master_seed", c.ensemble.master_seed}};
  j["output"] = {{"dir", c.output.dir}, {"formats", c.output.formats}};
  j["threads"] = c.threads;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base)
{
  std::ifstream in(path);
  if (!in) throw ConfigurationError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigurationError("config: " + path.string() + ": " + e.what());
  }
  return config_from_json(j, std::move(base));
}

std::string version_string() { return std::string(WICKFLOW_VERSION) + "+" + WICKFLOW_GIT_DESCRIBE; }

}  // namespace wickflow
