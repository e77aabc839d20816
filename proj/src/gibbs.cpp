#include "wickflow/gibbs.hpp"

#include <algorithm>
#include <cmath>

#include "wickflow/besov.hpp"
#include "wickflow/ou.hpp"
#include "wickflow/spectral.hpp"
#include "wickflow/stats.hpp"

namespace wickflow {

std::vector<double> FieldObservables::flatten() const
{
  std::vector<double> v{wick2, wick4};
  v.insert(v.end(), modes.begin(), modes.end());
  return v;
}

std::vector<std::pair<int, int>> observable_mode_list()
{
  std::vector<std::pair<int, int>> out;
  for (int k1 = 0; k1 <= 2; ++k1)
    for (int k2 = (k1 == 0 ? 0 : -2); k2 <= 2; ++k2) out.emplace_back(k1, k2);
  return out;
}

std::vector<std::string> observable_names()
{
  std::vector<std::string> names{"int_wick_phi2", "int_wick_phi4"};
  for (auto [k1, k2] : observable_mode_list())
    names.push_back("mode2_" + std::to_string(k1) + "_" + std::to_string(k2));
  return names;
}

FieldObservables observables(const SpectralField& phi, const CounterTerm& c, bool with_besov)
{
  FieldObservables o;
  const RealField u = to_real(phi);
  double s2 = 0.0, s4 = 0.0;
  for (double x : u.values()) {
    s2 += hermite_scaled(2, x, c.value);
    s4 += hermite_scaled(4, x, c.value);
  }
  const double w = kTorusVolume / static_cast<double>(u.grid().point_count());
  o.wick2 = w * s2;
  o.wick4 = w * s4;
  for (auto [k1, k2] : observable_mode_list())
    o.modes.push_back(phi.grid().contains(k1, k2) ? std::norm(phi(k1, k2)) : 0.0);
  if (with_besov && phi.grid().K() >= 2)
    o.besov = besov_norm(phi, BesovSpec{-0.1, kInf, kInf, 0.0});
  else
    o.besov = std::nan("");
  return o;
}

// ---------------------------------------------------------------------------
ChainState make_chain(const SpectralField& init, const PolynomialSpec& P, const CounterTerm& c, std::uint64_t seed)
{
  return ChainState{init, wick_action(init, P, c), Rng(seed), 0, 0};
}

void pcn_step(ChainState& s, double rho, const PolynomialSpec& P, const CounterTerm& c)
{
  if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("pcn_step: rho must lie in (0, 1]");
  SpectralField prop = sample_stationary(s.phi.grid(), s.rng);
  prop *= rho;
  SpectralField keep = s.phi;
  keep *= std::sqrt(1.0 - rho * rho);
  prop += keep;
  const double v_new = wick_action(prop, P, c);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(s.rng);
  ++s.proposed;
  if (std::log(u) < s.action - v_new) {
    s.phi = std::move(prop);
    s.action = v_new;
    ++s.accepted;
  }
}

ChainRecord run_chain(ChainState& state, const ChainOptions& opt, const PolynomialSpec& P, const CounterTerm& c)
{
  if (opt.n_steps <= opt.burn_in) throw ConfigurationError("run_chain: n_steps must exceed burn_in");
  if (opt.thinning < 1) throw ConfigurationError("run_chain: thinning must be >= 1");
  ChainRecord rec;
  const auto acc0 = state.accepted;
  const auto prop0 = state.proposed;
  for (long n = 0; n < opt.n_steps; ++n) {
    pcn_step(state, opt.rho, P, c);
    if (n < opt.burn_in || (n - opt.burn_in + 1) % opt.thinning != 0) continue;
    if (opt.keep_samples) rec.samples.push_back(state.phi);
    rec.wick2_trace.push_back(observables(state.phi, c).wick2);
  }
  rec.acceptance = static_cast<double>(state.accepted - acc0) / static_cast<double>(state.proposed - prop0);
  rec.iat = rec.wick2_trace.size() >= 4 ? stats::integrated_autocorrelation_time(rec.wick2_trace) : 1.0;
  if (rec.acceptance < 0.01) rec.warning = "acceptance rate below 1%; rho is too large";
  return rec;
}

double tune_rho(ChainState& state, double rho0, const PolynomialSpec& P, const CounterTerm& c, long pilot_steps,
                double target)
{
  double rho = rho0;
  constexpr int kRounds = 10;
  const long per_round = std::max<long>(pilot_steps / kRounds, 10);
  for (int r = 0; r < kRounds; ++r) {
    const auto a0 = state.accepted;
    for (long n = 0; n < per_round; ++n) pcn_step(state, rho, P, c);
    const double acc = static_cast<double>(state.accepted - a0) / static_cast<double>(per_round);
    rho = std::clamp(rho * std::exp(2.0 * (acc - target)), 1e-3, 1.0);
  }
  return rho;
}

}  // namespace wickflow
