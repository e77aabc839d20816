#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wickflow/fields.hpp"
#include "wickflow/rng.hpp"
#include "wickflow/wick.hpp"

namespace wickflow {

/// Low-mode observables shared by the sampler and the dynamics.
struct FieldObservables
{
  double wick2 = 0.0;  ///< int :phi^2:
  double wick4 = 0.0;  ///< int :phi^4:
  /// |phi_k|^2 on the half plane of |k|inf <= 2, in observable_mode_list() order.
  std::vector<double> modes;
  /// B^{-0.1}_{inf,inf} norm; NaN when skipped or K < 2.
  double besov = 0.0;

  /// wick2, wick4, then the modes.
  std::vector<double> flatten() const;
};

/// The 13 modes (k1, k2) with |k|inf <= 2, k1 > 0 or (k1 == 0 and k2 >= 0).
std::vector<std::pair<int, int>> observable_mode_list();
/// Names matching FieldObservables::flatten().
std::vector<std::string> observable_names();

FieldObservables observables(const SpectralField& phi, const CounterTerm& c, bool with_besov = false);

struct ChainState
{
  SpectralField phi;
  double action = 0.0;
  Rng rng;
  std::uint64_t accepted = 0;
  std::uint64_t proposed = 0;

  double acceptance_rate() const { return proposed ? static_cast<double>(accepted) / proposed : 0.0; }
};

ChainState make_chain(const SpectralField& init, const PolynomialSpec& P, const CounterTerm& c, std::uint64_t seed);

/// One preconditioned Crank-Nicolson step with proposal
/// sqrt(1 - rho^2) phi + rho xi, xi from the free field, accepted with
/// probability min(1, exp(V(phi) - V(phi'))).
void pcn_step(ChainState& s, double rho, const PolynomialSpec& P, const CounterTerm& c);

struct ChainOptions
{
  long n_steps = 0;
  long burn_in = 0;
  long thinning = 1;
  double rho = 0.2;
  bool keep_samples = true;
};

struct ChainRecord
{
  std::vector<SpectralField> samples;
  /// int :phi^2: at every kept sample.
  std::vector<double> wick2_trace;
  double acceptance = 0.0;
  double iat = 0.0;
  std::string warning;
};

ChainRecord run_chain(ChainState& state, const ChainOptions& opt, const PolynomialSpec& P, const CounterTerm& c);

/// Adjusts rho over short pilot segments toward the target acceptance; advances `state`.
double tune_rho(ChainState& state, double rho0, const PolynomialSpec& P, const CounterTerm& c, long pilot_steps,
                double target = 0.4);

}  // namespace wickflow
