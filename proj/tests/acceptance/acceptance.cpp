// Acceptance suite: one PASS/FAIL line per criterion.
//   wickflow_acceptance            run all criteria
//   wickflow_acceptance 2 6        run a subset
//   --json FILE                    also write the reports

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "wickflow/experiments.hpp"
#include "wickflow/parallel.hpp"

using namespace wickflow;
using namespace wickflow::experiments;

namespace {

struct Criterion
{
  int id;
  std::string title;
  double budget_seconds;
  std::function<Report()> run;
};

std::vector<Criterion> criteria()
{
  const int threads = resolve_threads(0);
  return {
      {1, "Hermite binomial identity", 1.0, [] { return binomial_identity({}); }},
      {2, "covariance conversion identity", 10.0, [] { return conversion_identity({}); }},
      {3, "recombination identity", 10.0, [] { return recombination_identity({}); }},
      {4, "free-field calibration", 30.0, [] { return free_field_calibration({}); }},
      {5, "Gaussian submodel exactness", 120.0, [] { return gaussian_submodel({}); }},
      {6, "invariance of the Gibbs measure", 900.0,
       [threads] {
         InvarianceParams p;
         p.threads = threads;
         return invariance(p);
       }},
      {7, "splitting equivalence", 120.0, [] { return equivalence(EquivalenceParams{}); }},
      {8, "linear scheme convergence", 10.0, [] { return linear_convergence({}); }},
      {9, "regularity bands", 600.0,
       [threads] {
         RegularityParams p;
         p.threads = threads;
         return regularity(p);
       }},
      {10, "Besov machinery", 30.0, [] { return besov_machinery({}); }},
      {11, "Wick-power convergence", 120.0, [] { return wick_convergence(WickConvergenceParams{}); }},
  };
}

}  // namespace

int main(int argc, char** argv)
{
  std::vector<int> selected;
  std::string json_path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--json" && i + 1 < argc) {
      json_path = argv[++i];
    } else {
      selected.push_back(std::atoi(a.c_str()));
    }
  }

  nlohmann::json all = nlohmann::json::array();
  int failures = 0;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Report r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.name = c.title;
      r.add(std::string("exception: ") + e.what(), 0.0, "none", false);
    }
    r.add("runtime [s]", r.seconds, "< " + std::to_string(static_cast<int>(c.budget_seconds)),
          r.seconds < c.budget_seconds);
    for (const auto& ch : r.checks)
      std::printf("    %-4s %s = %.6g (%s)\n", ch.pass ? "ok" : "FAIL", ch.name.c_str(), ch.value, ch.condition.c_str());
    std::printf("%s criterion %d: %s (%.2f s)\n", r.pass() ? "PASS" : "FAIL", c.id, c.title.c_str(), r.seconds);
    std::fflush(stdout);
    failures += !r.pass();
    auto j = r.to_json();
    j["criterion"] = c.id;
    all.push_back(j);
  }
  if (!json_path.empty()) std::ofstream(json_path) << all.dump(2) << "\n";
  return failures == 0 ? 0 : 1;
}
