#include "pgentropy/pseudogroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sine_forward(const std::array<double, 4>& c, double t) {
  return t + c[0] + c[1] * std::sin(kTwoPi * (t + c[2]));
}

// Solves sine_forward(c, t) = y + k for the k that lands t in [lo, hi).
// The lift is strictly increasing when |c1| * 2*pi < 1, which config
// validation enforces.
double sine_inverse(const std::array<double, 4>& c, double y, double lo, double hi) {
  auto f = [&](double t) { return sine_forward(c, t); };
  double flo = f(lo), fhi = f(hi);
  double k = std::floor(flo - y);
  for (int pass = 0; pass < 3; ++pass) {
    double target = y + k;
    if (target < flo - 1e-15) {
      k += 1.0;
      continue;
    }
    if (target > fhi + 1e-15) {
      k -= 1.0;
      continue;
    }
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      double m = 0.5 * (a + b);
      if (f(m) < target)
        a = m;
      else
        b = m;
    }
    return 0.5 * (a + b);
  }
  return lo;
}

}  // namespace

double PieceRule::apply(double t) const {
  switch (kind) {
    case RuleKind::identity:
      return t;
    case RuleKind::affine:
      return c[0] + c[1] * t;
    case RuleKind::moebius:
      return (c[0] * t + c[1]) / (c[2] * t + c[3]);
    case RuleKind::sine:
      return sine_forward(c, t);
    case RuleKind::sine_inverse:
      // callers pass the piece domain via c[3] unused; solved on [0,1)
      return sine_inverse(c, t, -1.0, 2.0);
  }
  return t;
}

const Piece* LocalMap::piece_at(double t) const {
  for (const auto& p : pieces)
    if (t >= p.lo && t < p.hi) return &p;
  return nullptr;
}

std::optional<double> LocalMap::apply_raw(double t) const {
  const Piece* p = piece_at(t);
  if (!p) return std::nullopt;
  return p->rule.apply(t);
}

GeneratingSet::GeneratingSet(CompactSpace space, std::vector<LocalMap> maps)
    : space_(space), maps_(std::move(maps)) {
  if (maps_.empty()) throw std::invalid_argument("generating set is empty");
  for (size_t i = 0; i < maps_.size(); ++i) {
    if (maps_[i].id != static_cast<int>(i))
      throw std::invalid_argument("generator ids must be 0..m-1 in order");
    if (maps_[i].inverse_id < 0 ||
        maps_[i].inverse_id >= static_cast<int>(maps_.size()))
      throw std::invalid_argument("inverse id out of range");
  }
  if (!maps_[0].is_identity())
    throw std::invalid_argument("generator 0 must be the identity e");
  for (const auto& m : maps_) {
    if (maps_[static_cast<size_t>(m.inverse_id)].inverse_id != m.id)
      throw std::invalid_argument("inverse pairing is not involutive");
    max_lipschitz_ = std::max(max_lipschitz_, m.lipschitz);
    if (m.id != 0) letter_ids_.push_back(m.id);
  }

  // Detect interior discontinuities (as maps of the circle) at piece
  // boundaries and at the wrap point.
  if (space_.kind() == SpaceKind::circle) {
    const double h = 1e-9;
    auto probe = [&](const LocalMap& m, double b) {
      double below = b - h;
      below -= std::floor(below);
      if (!m.defined_at(below) || !m.defined_at(b)) return;
      auto va = m.apply_raw(below), vb = m.apply_raw(b);
      if (!va || !vb) return;
      Point pa = space_.reduce(*va), pb = space_.reduce(*vb);
      if (space_.distance(pa, pb) > 1e-5) {
        for (double j : jump_points_)
          if (std::fabs(j - b) < 1e-12) return;
        jump_points_.push_back(b);
      }
    };
    for (const auto& m : maps_) {
      probe(m, 0.0);
      for (const auto& p : m.pieces) {
        if (p.lo > 0.0) probe(m, p.lo);
      }
    }
    std::sort(jump_points_.begin(), jump_points_.end());
  }
}

std::optional<double> GeneratingSet::apply_letter(int id, double t) const {
  auto raw = maps_[static_cast<size_t>(id)].apply_raw(t);
  if (!raw) return std::nullopt;
  return space_.reduce(*raw).coord;
}

Word Word::concat(const Word& h, const Word& g) {
  Word out = h;
  out.letters.insert(out.letters.end(), g.letters.begin(), g.letters.end());
  return out;
}

std::string Word::str(const GeneratingSet& gens) const {
  if (letters.empty()) return "e";
  std::string s;
  for (size_t i = 0; i < letters.size(); ++i) {
    if (i) s += ".";
    const auto& m = gens.map(letters[i]);
    s += m.label.empty() ? ("g" + std::to_string(letters[i])) : m.label;
  }
  return s;
}

bool is_reduced(const GeneratingSet& gens, const Word& w) {
  for (int id : w.letters)
    if (id == gens.identity_id()) return false;
  for (size_t i = 0; i + 1 < w.letters.size(); ++i)
    if (gens.inverse(w.letters[i]) == w.letters[i + 1]) return false;
  return true;
}

Word reduce_word(const GeneratingSet& gens, const Word& w) {
  std::vector<int> stack;
  // letters apply right to left; scan in application order
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    int id = *it;
    if (id == gens.identity_id()) continue;
    if (!stack.empty() && gens.inverse(stack.back()) == id)
      stack.pop_back();
    else
      stack.push_back(id);
  }
  Word out;
  out.letters.assign(stack.rbegin(), stack.rend());
  return out;
}

std::optional<Point> evaluate(const GeneratingSet& gens, const Word& w, Point p) {
  double v = p.coord;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    auto nv = gens.apply_letter(*it, v);
    if (!nv) return std::nullopt;
    v = *nv;
  }
  return Point{v};
}

double word_lipschitz(const GeneratingSet& gens, const Word& w) {
  double L = 1.0;
  for (int id : w.letters) L *= gens.map(id).lipschitz;
  return L;
}

WordStream::WordStream(const GeneratingSet& gens, int n, WordMode mode,
                       int first_letter)
    : gens_(gens), n_(n), mode_(mode), first_letter_(first_letter) {
  if (n_ < 0) throw std::invalid_argument("word length must be >= 0");
  digits_.assign(static_cast<size_t>(n_), 0);
}

bool WordStream::valid() const {
  if (n_ == 0) return first_letter_ < 0;
  if (first_letter_ >= 0 && digits_[0] != first_letter_) return false;
  if (mode_ == WordMode::raw) return true;
  for (int d : digits_)
    if (d == gens_.identity_id()) return false;
  for (size_t i = 0; i + 1 < digits_.size(); ++i)
    if (gens_.inverse(digits_[i]) == digits_[i + 1]) return false;
  return true;
}

bool WordStream::advance() {
  // odometer over ids, digits_[n-1] fastest (ascending in application-order
  // reading digits_[0], digits_[1], ...)
  int m = gens_.size();
  for (int i = n_ - 1; i >= 0; --i) {
    if (++digits_[static_cast<size_t>(i)] < m) return true;
    digits_[static_cast<size_t>(i)] = 0;
  }
  return false;
}

bool WordStream::next(Word& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    if (n_ == 0) {
      done_ = true;
      if (first_letter_ >= 0) return false;
      out.letters.clear();
      return true;
    }
  } else if (!advance()) {
    done_ = true;
    return false;
  }
  while (!valid()) {
    if (!advance()) {
      done_ = true;
      return false;
    }
  }
  // digits_ are in application order; the word stores h_1...h_k left to right
  out.letters.assign(digits_.rbegin(), digits_.rend());
  return true;
}

std::vector<Word> enumerate_words(const GeneratingSet& gens, int n,
                                  WordMode mode) {
  std::vector<Word> out;
  WordStream s(gens, n, mode);
  Word w;
  while (s.next(w)) out.push_back(w);
  return out;
}

uint64_t count_words(const GeneratingSet& gens, int n, WordMode mode) {
  if (mode == WordMode::raw) {
    uint64_t c = 1;
    for (int i = 0; i < n; ++i) c *= static_cast<uint64_t>(gens.size());
    return c;
  }
  uint64_t c = 0;
  WordStream s(gens, n, mode);
  Word w;
  while (s.next(w)) ++c;
  return c;
}

}  // namespace pge
