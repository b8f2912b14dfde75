#include "doctest.h"

#include <algorithm>
#include <set>

#include "pgentropy/gallery.hpp"
#include "pgentropy/pseudogroup.hpp"
#include "pgentropy/rng.hpp"

using namespace pge;

namespace {

Word word_of(std::initializer_list<int> ids) {
  Word w;
  w.letters.assign(ids);
  return w;
}

}  // namespace

TEST_CASE("dyadic evaluation examples") {
  auto sys = build_gallery("dyadic");
  // w = (b0, b0), p = 0.1 -> 0.4
  auto v = evaluate(sys.gens, word_of({1, 1}), Point{0.1});
  REQUIRE(v.has_value());
  CHECK(v->coord == doctest::Approx(0.4).epsilon(1e-15));
  // 0.7 is outside [0, 0.5)
  CHECK(!evaluate(sys.gens, word_of({1}), Point{0.7}).has_value());
  // empty word is the identity
  CHECK(evaluate(sys.gens, Word{}, Point{0.3})->coord == 0.3);
}

TEST_CASE("rotation words act as translations") {
  auto sys = build_gallery("rotation:0.25");
  auto v = evaluate(sys.gens, word_of({1, 1, 1}), Point{0.9});
  REQUIRE(v.has_value());
  CHECK(v->coord == doctest::Approx(0.65));
}

TEST_CASE("word counts") {
  auto sys = build_gallery("dyadic");  // 5 generators
  CHECK(count_words(sys.gens, 2, WordMode::raw) == 25);
  CHECK(count_words(sys.gens, 3, WordMode::raw) == 125);
  CHECK(enumerate_words(sys.gens, 0, WordMode::raw).size() == 1);
  CHECK(enumerate_words(sys.gens, 0, WordMode::raw)[0].empty());
  CHECK(enumerate_words(sys.gens, 0, WordMode::reduced).size() == 1);
}

TEST_CASE("free pair: 17 distinct reduced words of length <= 2") {
  // two rotations make {e, a, a^-1, b, b^-1} with free cancellation structure
  CompactSpace space(SpaceKind::circle);
  auto rot = [&](int id, int inv, double theta, const char* label) {
    LocalMap m;
    m.id = id;
    m.label = label;
    Piece p1;
    p1.lo = 0.0;
    p1.hi = 1.0 - theta;
    p1.rule.kind = RuleKind::affine;
    p1.rule.c = {theta, 1.0, 0, 0};
    Piece p2;
    p2.lo = 1.0 - theta;
    p2.hi = 1.0;
    p2.rule.kind = RuleKind::affine;
    p2.rule.c = {theta - 1.0, 1.0, 0, 0};
    m.pieces = {p1, p2};
    m.lipschitz = 1.0;
    m.inverse_id = inv;
    return m;
  };
  LocalMap e;
  e.id = 0;
  e.label = "e";
  Piece full;
  full.lo = 0;
  full.hi = 1;
  full.rule.kind = RuleKind::identity;
  e.pieces = {full};
  e.inverse_id = 0;
  GeneratingSet gens(space, {e, rot(1, 2, 0.3183098861837907, "a"),
                             rot(2, 1, 0.6816901138162093, "ainv"),
                             rot(3, 4, 0.1415926535897932, "b"),
                             rot(4, 3, 0.8584073464102068, "binv")});

  // brute force: all raw tuples of length <= 2, cancelled and deduplicated
  std::set<std::vector<int>> canonical;
  for (int n = 0; n <= 2; ++n)
    for (const auto& w : enumerate_words(gens, n, WordMode::raw))
      canonical.insert(reduce_word(gens, w).letters);
  CHECK(canonical.size() == 17);

  // the reduced stream enumerates exactly those
  std::set<std::vector<int>> streamed;
  for (int n = 0; n <= 2; ++n)
    for (const auto& w : enumerate_words(gens, n, WordMode::reduced))
      streamed.insert(w.letters);
  CHECK(streamed == canonical);
}

TEST_CASE("word_lipschitz products") {
  auto sys = build_gallery("dyadic");
  Word w8;
  w8.letters.assign(8, 1);
  CHECK(word_lipschitz(sys.gens, w8) == doctest::Approx(256.0));
  CHECK(word_lipschitz(sys.gens, Word{}) == 1.0);
  CHECK(word_lipschitz(sys.gens, word_of({1, 3})) == doctest::Approx(1.0));
}

TEST_CASE("reduction soundness: cancellation only enlarges domains") {
  auto sys = build_gallery("dyadic");
  uint64_t state = 99;
  int compared = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    state = splitmix64(state);
    int len = 1 + static_cast<int>(state % 6);
    Word w;
    for (int i = 0; i < len; ++i) {
      state = splitmix64(state);
      w.letters.push_back(static_cast<int>(state % 5));
    }
    Word r = reduce_word(sys.gens, w);
    if (r == w) continue;
    state = splitmix64(state);
    Point p{unit_from_key(state)};
    auto vw = evaluate(sys.gens, w, p);
    if (!vw) continue;
    auto vr = evaluate(sys.gens, r, p);
    REQUIRE(vr.has_value());
    CHECK(sys.gens.space().distance(*vw, *vr) <= 1e-12);
    ++compared;
  }
  CHECK(compared > 200);
}

TEST_CASE("evaluate is injective on sampled pairs of its domain") {
  auto sys = build_gallery("dyadic");
  uint64_t state = 5;
  for (const auto& w : enumerate_words(sys.gens, 3, WordMode::reduced)) {
    for (int trial = 0; trial < 40; ++trial) {
      state = splitmix64(state);
      Point p{unit_from_key(state)};
      state = splitmix64(state);
      Point q{unit_from_key(state)};
      if (p.coord == q.coord) continue;
      auto vp = evaluate(sys.gens, w, p);
      auto vq = evaluate(sys.gens, w, q);
      if (vp && vq) CHECK(vp->coord != vq->coord);
    }
  }
}

TEST_CASE("raw word count |G1|^n is exact") {
  auto sys = build_gallery("rotation:0.3");  // 3 generators
  for (int n = 0; n <= 6; ++n) {
    uint64_t expect = 1;
    for (int i = 0; i < n; ++i) expect *= 3;
    CHECK(count_words(sys.gens, n, WordMode::raw) == expect);
    CHECK(enumerate_words(sys.gens, n, WordMode::raw).size() == expect);
  }
}

TEST_CASE("word stream partition by first-applied letter") {
  auto sys = build_gallery("dyadic");
  std::vector<Word> all = enumerate_words(sys.gens, 3, WordMode::reduced);
  std::vector<Word> merged;
  for (int first : sys.gens.letter_ids()) {
    WordStream s(sys.gens, 3, WordMode::reduced, first);
    Word w;
    while (s.next(w)) merged.push_back(w);
  }
  CHECK(merged.size() == all.size());
  std::set<std::vector<int>> a, b;
  for (const auto& w : all) a.insert(w.letters);
  for (const auto& w : merged) b.insert(w.letters);
  CHECK(a == b);
}
