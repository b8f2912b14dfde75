#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pgentropy/orbits.hpp"
#include "pgentropy/ymetric.hpp"

namespace pge {

struct SeparationParams {
  int n = 0;
  double eps = 0.0;
};

struct SeparationResult {
  bool separated = false;
  Word witness;  // meaningful when separated
  int64_t nodes = 0;
};

// (n, eps)-separation of two points: exists a reduced word of length <= n,
// defined at both, with d(w p, w q) >= eps ("=" counts). The witness is the
// first one in (length, application-order lexicographic) enumeration order.
SeparationResult separated(const GeneratingSet& gens, Point p, Point q,
                           const SeparationParams& params);

// Strong (n, eps)-separation of pseudo-orbits: a reduced word of length <= n
// in both domains with d(x(g), y(g)) >= eps. Adversarial orbits are probed
// along their distinguished branch first; the witness is deterministic but not
// necessarily the enumeration-first one.
SeparationResult strongly_separated(const PseudoOrbit& x, const PseudoOrbit& y,
                                    const SeparationParams& params);

// Greedy pass in candidate order (candidates must be sorted by coordinate)
// keeping each point separated from all kept points: a maximal separated
// subset of the pool, hence a lower-bound witness for N(n, eps, X).
std::vector<Point> max_separated_set(const GeneratingSet& gens,
                                     const std::vector<Point>& candidates,
                                     const SeparationParams& params);

struct TableRow {
  int n = 0;
  double eps = 0.0;
  double alpha = 0.0;
  int64_t count = 0;
  bool resolution_flag = false;  // grid spacing exceeds eps * L^-n
  int max_witness_len = 0;
  int64_t pair_tests = 0;
  int64_t nodes = 0;
};

struct EntropyTable {
  std::vector<TableRow> rows;
};

// Lower-bound count over the canonical uniform grid of `grid` cells.
TableRow count_points(const GeneratingSet& gens, const SeparationParams& params,
                      int grid);

// Greedy maximal strongly-separated subset of the pool, canonical order;
// returns the kept indices.
std::vector<int> max_strongly_separated(const OrbitPool& pool,
                                        const SeparationParams& params);

// Greedy maximal strongly-separated subset of the pool, canonical order.
TableRow count_pseudo_orbits(const OrbitPool& pool,
                             const SeparationParams& params);

struct SlopeEstimate {
  double eps = 0.0;
  double slope_lsq = 0.0;      // least-squares slope of log count vs n
  double slope_tailmax = 0.0;  // max of (1/n) log count over upper half window
  int win_lo = 0, win_hi = 0;  // the n-window used
  bool resolution_limited = false;
};

struct EntropyEstimate {
  std::vector<SlopeEstimate> per_eps;  // ordered by decreasing eps
  double h = 0.0;                      // slope_lsq at the smallest eps
  double estimator_spread = 0.0;       // |lsq - tailmax| at the smallest eps
  double eps_spread = 0.0;             // |h(smallest) - h(second smallest)|
  bool stable = false;
};

// Finite-range approximation of the entropy limits. Per eps the n-window is
// the longest run of consecutive unflagged rows when it has >= 4 levels,
// otherwise all rows (flagged as resolution_limited). The headline h is the
// least-squares slope at the smallest eps; the tail-max estimator is reported
// as a diagnostic. Throws when fewer than 4 levels are available for some eps.
EntropyEstimate entropy_estimate(const EntropyTable& table);

// Tolerance schedules beta_n for pseudo-orbit counting.
struct Schedule {
  enum class Kind { theorem1, remark, constant, list };
  Kind kind = Kind::theorem1;
  double L = 1.0;
  double eps = 0.0;
  double value = 0.0;          // constant
  std::vector<double> values;  // list, indexed by n starting at n_lo

  int n_lo = 0;  // list indexing origin

  static Schedule theorem1(double L, double eps);
  static Schedule remark(double L, double eps);
  static Schedule constant(double alpha);
  static Schedule list(std::vector<double> values, int n_lo);

  double beta(int n) const;
  void validate(int n_lo, int n_hi) const;
  std::string describe() const;
};

using PoolBuilder =
    std::function<OrbitPool(int n, double eps, double alpha)>;

struct PseudoEntropyResult {
  EntropyTable pseudo_rows;
  EntropyTable orbit_rows;
  EntropyEstimate pseudo_estimate;
  EntropyEstimate orbit_estimate;
};

// For each (n, eps): builds a pool of beta_n-pseudo-orbits and counts strong
// separation; reports alongside the orbit-only estimate for the Theorem-1
// comparison. The default pool is one exact and one perturbed orbit per grid
// point, with per-orbit seeds derived from (seed, grid index).
PseudoEntropyResult pseudo_entropy_estimate(
    const GeneratingSet& gens, const Schedule& schedule, int n_lo, int n_hi,
    const std::vector<double>& eps_grid, int grid, uint64_t seed, int threads,
    const PoolBuilder& builder = nullptr);

}  // namespace pge
