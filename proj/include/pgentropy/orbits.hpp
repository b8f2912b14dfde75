#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "pgentropy/pseudogroup.hpp"

#include "json.hpp"

namespace pge {

// Expansion bookkeeping for the adversarial pseudo-orbits of the Morse-Smale
// free-group example: the two positive generator ids, the tolerance ceiling,
// and the arcs U_i on which f_i' exceeds 1 + delta on an alpha0-neighborhood.
struct AdversarialTemplate {
  int f0_id = 0;
  int f1_id = 0;
  double alpha0 = 0.0;
  double delta = 0.0;
  std::vector<std::pair<double, double>> u0_arcs;  // arcs [a,b), wrap split
  std::vector<std::pair<double, double>> u1_arcs;

  bool in_u0(double t) const;
  bool in_u1(double t) const;
  // f0 when t in U_0, else f1 (the cover U_0 u U_1 = S^1 is verified at
  // construction of the pair).
  int chosen_letter(double t) const { return in_u0(t) ? f0_id : f1_id; }
};

// An alpha-pseudo-orbit x: D_x -> X as a lazily evaluated partial map on the
// word tree. Values are pure functions of (provenance, path), so concurrent
// evaluation is safe and order-independent. Cheap to copy (shared immutable
// state).
class PseudoOrbit {
 public:
  enum class Provenance { exact, perturbed, adversarial, shifted };

  // A position in the word tree: the value x(w) plus enough state to extend
  // the word one letter at a time. Cursors are value types owned by the
  // traversal.
  struct Cursor {
    double value = 0.0;
    uint64_t key = 0;      // perturbation path key
    int depth = 0;
    int last_letter = -1;  // -1 at the root
    int8_t adv_state = 0;  // 0 spine, 1 at branch base, 2 on branch, 3 off
    int32_t adv_pos = 0;   // spine letters consumed / branch depth
  };

  // x_p(g) = g(p): alpha = 0, D_x = {g : p in U_g}.
  static PseudoOrbit exact_orbit(const GeneratingSet& gens, Point p);

  // x(h,w) = reduce(h(x(w)) + xi) with xi drawn from [-alpha, alpha] by the
  // splitmix64-fold-v1 stream indexed by (seed, path). Fresh noise per tuple,
  // so Eq-style tolerance holds at every tuple edge by construction.
  static PseudoOrbit perturbed_orbit(const GeneratingSet& gens, Point p,
                                     double alpha, uint64_t seed);

  // The distinguished-branch pseudo-orbit x~_g of the section-6 roster:
  // exact-orbit values everywhere except along the branch beyond g, where each
  // step applies the U-selected expanding generator and shifts by +alpha.
  static PseudoOrbit adversarial_orbit(
      const GeneratingSet& gens, std::shared_ptr<const AdversarialTemplate> t,
      Point p, Word branch_base, double alpha);

  // sigma_{g0}: y(w) = x(w, g0). Precondition g0 in D_x (throws otherwise).
  PseudoOrbit shifted(const Word& g0) const;

  // Test instrumentation: a copy whose value is shifted by `delta` whenever a
  // step with `letter` lands at `depth`.
  PseudoOrbit corrupted_at(int depth, int letter, double delta) const;

  const GeneratingSet& gens() const { return *impl_->gens; }
  Provenance provenance() const { return impl_->prov; }
  double alpha() const { return impl_->alpha; }
  uint64_t seed() const { return impl_->seed; }
  Point base_point() const { return Point{impl_->root.value}; }
  const Word& branch_base() const { return impl_->branch; }
  const AdversarialTemplate* adversarial() const { return impl_->tmpl.get(); }

  Cursor root() const { return impl_->root; }
  // Extends the word by one letter (tuple tree). Returns false when the
  // current value is outside the letter's domain; c is untouched then.
  bool step(Cursor& c, int letter) const;

  std::optional<double> value(const Word& w) const;
  bool defined(const Word& w) const { return value(w).has_value(); }

  // Reduced-tree materialization, breadth-first up to `depth` (at most
  // `max_nodes` nodes) - the serialization payload.
  std::vector<std::pair<Word, double>> materialize(int depth,
                                                   size_t max_nodes = 4096) const;
  nlohmann::json to_json(int materialize_depth = 0) const;

 private:
  struct Impl {
    const GeneratingSet* gens = nullptr;
    Provenance prov = Provenance::exact;
    double alpha = 0.0;
    uint64_t seed = 0;
    Cursor root;
    // adversarial
    std::shared_ptr<const AdversarialTemplate> tmpl;
    Word branch;
    // shifted
    std::shared_ptr<const Impl> parent;
    Word shift_word;
    // corruption trigger (test instrumentation)
    int corrupt_depth = -1;
    int corrupt_letter = -1;
    double corrupt_delta = 0.0;
  };

  explicit PseudoOrbit(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  static bool step_impl(const Impl& im, Cursor& c, int letter);

  std::shared_ptr<const Impl> impl_;
};

struct VerifyViolation {
  Word word;
  double deviation = 0.0;
  bool domain_rule = false;  // domain-closure violation rather than tolerance
};

struct VerifyReport {
  bool ok = true;
  int64_t nodes = 0;
  double max_deviation = 0.0;
  std::vector<VerifyViolation> violations;
};

// Checks the tolerance d(h(x(w)), x(h,w)) <= alpha + 1e-12 and the domain
// closure rule ((h,w) in D_x iff x(w) in U_h) at every node of the tuple tree
// up to `depth`.
VerifyReport verify_pseudo_orbit(const PseudoOrbit& x, int depth,
                                 size_t max_violations = 16);

// A finite stand-in for the pseudo-orbit space Y_alpha: orbits over one
// generating set with a common tolerance bound, kept in canonical order
// (base coordinate, provenance, seed).
struct OrbitPool {
  const GeneratingSet* gens = nullptr;
  double alpha = 0.0;
  std::vector<PseudoOrbit> orbits;

  // One exact and/or one perturbed orbit per grid point; per-orbit seeds are
  // splitmix64(seed ^ index).
  static OrbitPool seeded_grid(const GeneratingSet& gens, int grid,
                               double alpha, uint64_t seed,
                               bool include_exact = true,
                               bool include_perturbed = true);
  void sort_canonical();
  VerifyReport verify(int depth) const;
};

}  // namespace pge
