#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pgentropy/space.hpp"

namespace pge {

enum class RuleKind { identity, affine, moebius, sine, sine_inverse };

// One closed-form piece of a local map. Formulas act on the coordinate in
// [0,1); results are reduced into the space by the caller.
//   identity:     t
//   affine:       c0 + c1*t
//   moebius:      (c0*t + c1) / (c2*t + c3)
//   sine:         t + c0 + c1*sin(2*pi*(t + c2))
//   sine_inverse: inverse of the sine formula with the same params
//                 (solved by bisection on the monotone lift)
struct PieceRule {
  RuleKind kind = RuleKind::identity;
  std::array<double, 4> c{};

  double apply(double t) const;
};

struct Piece {
  double lo = 0.0;
  double hi = 1.0;  // domain [lo, hi)
  PieceRule rule;
};

// A local Lipschitz transformation g with explicit domain U_g (a finite union
// of half-open arcs/intervals). `lipschitz` is a verified upper bound for the
// coordinate slope of every piece; `inverse_id` names g^{-1} in the same set.
struct LocalMap {
  int id = 0;
  std::string label;
  std::vector<Piece> pieces;  // sorted by lo, pairwise disjoint
  double lipschitz = 1.0;
  int inverse_id = 0;

  bool is_identity() const {
    return pieces.size() >= 1 && pieces[0].rule.kind == RuleKind::identity;
  }
  const Piece* piece_at(double t) const;
  bool defined_at(double t) const { return piece_at(t) != nullptr; }
  // Raw formula value; no reduction, nullopt outside the domain.
  std::optional<double> apply_raw(double t) const;
};

// The finite symmetric generating set G_1: contains the identity e (id 0) and
// is closed under inverse_id. Immutable after construction and safe to share
// across threads.
class GeneratingSet {
 public:
  GeneratingSet(CompactSpace space, std::vector<LocalMap> maps);

  const CompactSpace& space() const { return space_; }
  const std::vector<LocalMap>& maps() const { return maps_; }
  const LocalMap& map(int id) const { return maps_[static_cast<size_t>(id)]; }
  int size() const { return static_cast<int>(maps_.size()); }
  int identity_id() const { return 0; }
  int inverse(int id) const { return maps_[static_cast<size_t>(id)].inverse_id; }

  // L: max of the generator Lipschitz constants (>= 1 when any generator is
  // non-contracting; the identity contributes 1).
  double max_lipschitz() const { return max_lipschitz_; }

  // Non-identity generator ids in increasing order.
  const std::vector<int>& letter_ids() const { return letter_ids_; }

  // Coordinates where some generator, viewed as a map of the circle, is
  // discontinuous in the interior of its domain (e.g. the wrap point of the
  // dyadic inverse branches). Used by the separation search to keep pruning
  // sound for pairs straddling such a point.
  const std::vector<double>& jump_points() const { return jump_points_; }

  // Applies one letter to a reduced coordinate: domain check + formula +
  // reduction. nullopt when t is outside U_h.
  std::optional<double> apply_letter(int id, double t) const;

 private:
  CompactSpace space_;
  std::vector<LocalMap> maps_;
  double max_lipschitz_ = 1.0;
  std::vector<int> letter_ids_;
  std::vector<double> jump_points_;
};

// A word (h_1, ..., h_k): letters stored leftmost-first, applied right to
// left, so evaluate((h,g), p) = h(g(p)). The empty word denotes e.
struct Word {
  std::vector<int> letters;

  int length() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }
  static Word single(int id) { return Word{{id}}; }
  // (h, g): h applied after g.
  static Word concat(const Word& h, const Word& g);
  std::string str(const GeneratingSet& gens) const;
  bool operator==(const Word& o) const { return letters == o.letters; }
};

// True when the word contains no identity letter and no adjacent (g, g^{-1}).
bool is_reduced(const GeneratingSet& gens, const Word& w);

// Cancels adjacent inverse pairs and drops identity letters until stable.
Word reduce_word(const GeneratingSet& gens, const Word& w);

// Applies the letters right to left, checking at every stage that the
// intermediate point lies in the next letter's domain. nullopt (undefined) is
// a normal outcome, not a failure.
std::optional<Point> evaluate(const GeneratingSet& gens, const Word& w, Point p);

// Product of the letter Lipschitz constants; an upper bound for the
// composite's Lipschitz constant on its domain. Empty word -> 1.
double word_lipschitz(const GeneratingSet& gens, const Word& w);

enum class WordMode { raw, reduced };

// Deterministic stream of the words of length exactly n. Raw mode yields all
// |G_1|^n tuples; reduced mode only words with no identity letters and no
// adjacent inverse pair. Order: ascending in the rightmost-first (application
// order) reading, which is the order the witness search explores. A stream
// may be restricted to words whose first-applied letter is `first_letter`,
// which partitions the stream for parallel consumption.
class WordStream {
 public:
  WordStream(const GeneratingSet& gens, int n, WordMode mode,
             int first_letter = -1);
  bool next(Word& out);

 private:
  const GeneratingSet& gens_;
  int n_;
  WordMode mode_;
  int first_letter_;
  bool done_ = false;
  bool started_ = false;
  std::vector<int> digits_;  // application order: digits_[0] applied first

  bool advance();
  bool valid() const;
};

std::vector<Word> enumerate_words(const GeneratingSet& gens, int n,
                                  WordMode mode);

// |G_1|^n for raw mode; stream count for reduced mode.
uint64_t count_words(const GeneratingSet& gens, int n, WordMode mode);

}  // namespace pge
