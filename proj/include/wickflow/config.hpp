#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wickflow/shifted.hpp"
#include "wickflow/wick.hpp"

namespace wickflow {

/// Resolved settings of one command. Every field has a default, a JSON file
/// overrides any subset and command-line flags override the file.
struct ExperimentConfig
{
  struct Grid
  {
    int K = 8;
    /// Number of factors the collocation grid must dealias; 0 picks max(3, 2N).
    int degree = 0;
  } grid;

  struct Polynomial
  {
    /// Coefficients a_0..a_{2N} of q.
    std::vector<double> a{0.0, 0.0, 0.0, 0.0, 0.25};
  } polynomial;

  struct Solver
  {
    double dt = 1e-3;
    double T = 0.25;
    int record_every = 10;
    int tower_refresh = 1;
    /// "zero" (X(0) = 0) or "free_field" (X(0) sampled from the free field).
    std::string initial = "zero";
  } solver;

  struct Sampler
  {
    double rho = 0.2;
    long n_steps = 20000;
    long burn_in = 2000;
    long thinning = 10;
  } sampler;

  struct Ensemble
  {
    int n_traj = 4;
    std::uint64_t master_seed = 20240601;
  } ensemble;

  struct Output
  {
    std::string dir = "wickflow_out";
    /// Subset of {"csv", "wck1", "json"}.
    std::vector<std::string> formats{"csv", "json"};
  } output;

  /// 0 = hardware concurrency.
  int threads = 0;

  /// Throws ConfigurationError on any inconsistency.
  void validate() const;

  PolynomialSpec polynomial_spec() const;
  int grid_degree() const;
  TorusGrid torus() const;
  SolverConfig solver_config() const;
  bool wants(const std::string& format) const;
};

/// Overlays `j` onto `base`; unknown keys are configuration errors.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Version string from git describe at configure time.
std::string version_string();

}  // namespace wickflow
