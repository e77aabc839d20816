#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wickflow/errors.hpp"
#include "wickflow/experiments.hpp"
#include "wickflow/shifted.hpp"

namespace ex = wickflow::experiments;
using wickflow::ExperimentConfig;

namespace {

enum Exit
{
  kOk = 0,
  kFail = 1,
  kUsage = 2,
  kBlowUp = 3,
  kWarmup = 4,
};

struct Overrides
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> K;
  std::optional<double> dt;
  std::optional<int> threads;
};

ExperimentConfig resolve(const std::string& command, const Overrides& o)
{
  ExperimentConfig c = ex::defaults_for(command);
  if (!o.config.empty()) c = wickflow::load_config(o.config, c);
  if (const char* env = std::getenv("WICKFLOW_OUT"); env && *env) c.output.dir = env;
  if (o.out) c.output.dir = *o.out;
  if (o.seed) c.ensemble.master_seed = *o.seed;
  if (o.K) c.grid.K = *o.K;
  if (o.dt) c.solver.dt = *o.dt;
  if (o.threads) c.threads = *o.threads;
  c.validate();
  return c;
}

void print(const ex::Report& r)
{
  for (const auto& ch : r.checks)
    std::printf("  %-4s %s = %.6g (%s)\n", ch.pass ? "ok" : "FAIL", ch.name.c_str(), ch.value, ch.condition.c_str());
  std::printf("%s %s (%.2f s)\n", r.pass() ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
}

void write_summary(const std::string& command, const ex::Report& r, const ExperimentConfig& c)
{
  if (!c.wants("json")) return;
  std::filesystem::create_directories(c.output.dir);
  const auto path = std::filesystem::path(c.output.dir) / (command + "_summary.json");
  std::ofstream(path) << ex::summary(r, c).dump(2) << "\n";
  std::printf("summary: %s\n", path.string().c_str());
}

int run(const std::string& command, const Overrides& o)
{
  ExperimentConfig c;
  try {
    c = resolve(command, o);
  } catch (const wickflow::ConfigurationError& e) {
    std::fprintf(stderr, "wickflow %s: invalid configuration: %s\n", command.c_str(), e.what());
    return kUsage;
  }

  try {
    ex::Report r;
    if (command == "simulate" || command == "gibbs") {
      const auto res = command == "simulate" ? ex::simulate(c) : ex::gibbs(c);
      for (const auto& f : res.files) std::printf("wrote %s\n", f.c_str());
      r = res.report;
    } else if (command == "invariance") {
      r = ex::invariance(c);
    } else if (command == "identities") {
      r = ex::identities(c);
    } else if (command == "regularity") {
      r = ex::regularity(c);
    } else if (command == "equivalence") {
      r = ex::equivalence(c);
    } else if (command == "wick-convergence") {
      r = ex::wick_convergence(c);
    }
    print(r);
    write_summary(command, r, c);
    return r.pass() ? kOk : kFail;
  } catch (const wickflow::BlowUpError& e) {
    std::fprintf(stderr, "wickflow %s: blow-up at t = %g (last valid sup %g): %s\n", command.c_str(), e.time(),
                 e.last_valid().max_abs(), e.what());
    return kBlowUp;
  } catch (const ex::ChainWarmupError& e) {
    std::fprintf(stderr, "wickflow %s: %s\n", command.c_str(), e.what());
    return kWarmup;
  } catch (const wickflow::ConfigurationError& e) {
    std::fprintf(stderr, "wickflow %s: invalid configuration: %s\n", command.c_str(), e.what());
    return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Stochastic quantization of P(phi)_2 on the two-torus"};
  app.set_version_flag("--version", wickflow::version_string());
  app.require_subcommand(1);

  Overrides o;
  const char* commands[][2] = {
      {"simulate", "Solve the shifted equation for an ensemble and write observables"},
      {"gibbs", "Sample the Gibbs measure with preconditioned Crank-Nicolson"},
      {"invariance", "Observable drift test of the Gibbs measure under the dynamics"},
      {"identities", "Deterministic Wick-calculus identities"},
      {"regularity", "Besov regularity bands of Z and Y"},
      {"equivalence", "Agreement of the two splittings"},
      {"wick-convergence", "Decay of Wick-square differences across cutoffs"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--k", o.K, "Spectral cutoff K");
    sub->add_option("--dt", o.dt, "Time step");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores, 1 = sequential)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  return run(app.get_subcommands().front()->get_name(), o);
}
