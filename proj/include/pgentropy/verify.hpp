#pragma once

#include <string>
#include <vector>

#include "pgentropy/gallery.hpp"

#include "json.hpp"

namespace pge {

struct SuiteCheck {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // measured slack (sign convention: >= 0 means pass)
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  bool ok = true;
  std::vector<SuiteCheck> checks;

  void add(const std::string& name, bool pass, double margin,
           const std::string& detail = "");
  nlohmann::json to_json() const;
};

// d0 symmetry / triangle inequality within tail slack / d1 diagonal /
// K-monotonicity / shift Lipschitz bound / positivity surrogate / finite-net
// evidence, on a seeded perturbed pool over the dyadic system.
SuiteReport verify_metrics(uint64_t seed, int threads);

// Perturbed-orbit tolerance, projection bound alpha*(1+L+...+L^{n-1}) against
// exact companions, evaluation-order independence, shift identities.
SuiteReport verify_orbits(uint64_t seed, int threads);

// Section-6 hypothesis suite, branch growth over seeded random branches, the
// #A_alpha identity and pairwise separation at small n.
SuiteReport verify_section6(uint64_t seed, int threads);

std::vector<SuiteReport> verify_all(uint64_t seed, int threads);

}  // namespace pge
