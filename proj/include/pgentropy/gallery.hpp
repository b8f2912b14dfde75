#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgentropy/separation.hpp"

namespace pge {

// The Morse-Smale pair on the circle: two degree-one homeomorphisms f0, f1,
// each with one source p_i and one sink q_i, whose expansion regions
// U_i = { p : f_i' > 1 + delta on [p - alpha0, p + alpha0] } cover the circle.
// delta is the claimed margin; the hypothesis checker measures the actual one.
struct MorseSmalePair {
  int f0_id = 1;
  int f1_id = 3;
  double p0 = 0.0, q0 = 0.0, p1 = 0.0, q1 = 0.0;
  double delta = 0.0;   // claimed expansion margin
  double alpha0 = 0.0;  // perturbation ceiling
  std::shared_ptr<const AdversarialTemplate> tmpl;
};

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::string detail;
};

struct HypothesisReport {
  bool ok = false;
  double measured_delta = 0.0;  // min over the circle of the best neighborhood slope - 1
  double alpha0 = 0.0;
  std::vector<HypothesisCheck> checks;
};

struct GallerySystem {
  std::string name;
  GeneratingSet gens;
  std::optional<MorseSmalePair> pair;   // section6 only
  std::optional<HypothesisReport> hypothesis;
};

// Built-in systems: "identity", "rotation:<theta>" (theta in (0,1)),
// "dyadic", "section6". The section-6 build runs the hypothesis suite and
// throws naming the violated condition if it fails.
GallerySystem build_gallery(const std::string& name);

// Piecewise-affine Morse-Smale circle map with source p, sink q, expansion
// slope 1+delta and contraction subarcs of length w beside the sink; used by
// the gallery and by the config "plateau"/"plateau_inverse" kinds. inverse_id
// is left for the caller.
LocalMap make_plateau_map(int id, const std::string& label, double p, double q,
                          double delta, double w);
LocalMap make_plateau_inverse(int id, const std::string& label, double p,
                              double q, double delta, double w);

// Verifies the section-6 hypotheses on a fine grid using finite differences
// (independent of the piece data): fixed point count and types, disjointness,
// and the cover U0 u U1 = S^1 at (delta, alpha0).
HypothesisReport check_section6_hypotheses(const GeneratingSet& gens,
                                           const MorseSmalePair& pair,
                                           int grid = 10000);

// floor(log(eps/alpha) / log(1+delta)); requires 0 < alpha <= eps, delta > 0.
int n_eps_alpha(double eps, double alpha, double delta);

// The roster pseudo-orbit x~_g: exact everywhere except along the
// distinguished branch beyond g, where each step applies the U-selected
// expanding generator and shifts forward by alpha.
PseudoOrbit adversarial_pseudo_orbit(const GallerySystem& sys, Point x,
                                     const Word& g, double alpha);

struct BranchNodeCheck {
  int j = 0;
  double deviation = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct BranchGrowthReport {
  bool ok = true;
  bool vacuous = false;  // alpha = 0
  int depth = 0;
  double min_margin = 0.0;       // min of deviation - bound over checked nodes
  double final_deviation = 0.0;  // at the deepest node
  std::vector<BranchNodeCheck> violations;
};

// Verifies the growth of the branch deviations against the exact orbit:
// deviation_1 >= alpha (the roster pins the first step to exactly alpha) and
// deviation_j >= alpha*(1+delta)^j for j >= 2; when eps is supplied,
// additionally deviation_j >= eps for every j > n_eps_alpha(eps, alpha, delta).
BranchGrowthReport check_branch_growth(const GallerySystem& sys,
                                       const PseudoOrbit& adversarial,
                                       int depth,
                                       std::optional<double> eps = {});

struct GapReport {
  int n = 0;
  double eps = 0.0;
  double alpha = 0.0;
  int64_t base_count = 0;    // #A
  int64_t pseudo_count = 0;  // #A_alpha, verified pairwise strongly separated
  int n_eps_alpha = 0;
  int separation_length = 0;     // n + n(eps, alpha) + 1
  bool identity_ok = false;      // #A_alpha == 2^n #A
  bool separation_ok = false;    // every pair strongly separated
  bool inequality_ok = false;    // pseudo_count >= 2^n * base_count
  double min_pair_margin = 0.0;  // min over verified pairs of (distance - eps)
  std::string failure;           // names the offending pair on failure
};

// Builds a maximal (n, eps)-separated base set A on the grid, the family
// A_alpha = { x~_g : x in A, g in {f0,f1}^n }, and verifies the section-6
// identities. Pair verification follows the two-case argument: distinct bases
// are separated by a base witness word (exact roster values), equal bases by
// the branch deviation at depth n(eps,alpha)+1. Exhaustive mode checks every
// family pair; otherwise all equal-base pairs are checked and each base pair
// is spot-checked on four branch combinations (its witness word is branch
// independent).
GapReport gap_experiment(const GallerySystem& sys, int n, double eps,
                         double alpha, int grid, int threads = 1,
                         bool exhaustive = true);

struct GapSeries {
  std::vector<GapReport> reports;
  double slope_orbit = 0.0;   // lsq slope of log #A(n) over the n range
  double slope_pseudo = 0.0;  // lsq slope of log #A_alpha(n)
  double slope_gap = 0.0;
};

// Exhaustive pair verification up to `exhaustive_limit`, spot checks beyond.
GapSeries gap_series(const GallerySystem& sys, int n_lo, int n_hi, double eps,
                     double alpha, int grid, int threads = 1,
                     int exhaustive_limit = 6);

// Pool builder realizing the constant-alpha section-6 counting: for a row at
// separation length n the pool is the adversarial family built from base
// length n - n(eps,alpha) - 1 when that is positive, else exact grid orbits.
PoolBuilder section6_pool_builder(const GallerySystem& sys, int grid);

// Constant-alpha pseudo-entropy rows for the section-6 system, counted from
// the verified adversarial families, next to plain orbit counting rows at the
// same base lengths. Row n's pseudo count is at separation length
// n + n(eps,alpha) + 1.
PseudoEntropyResult section6_const_alpha_estimate(const GallerySystem& sys,
                                                  int n_lo, int n_hi,
                                                  double eps, double alpha,
                                                  int grid, int threads);

}  // namespace pge
