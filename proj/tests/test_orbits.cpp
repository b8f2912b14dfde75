#include "doctest.h"

#include <cmath>

#include "pgentropy/gallery.hpp"
#include "pgentropy/orbits.hpp"
#include "pgentropy/rng.hpp"

using namespace pge;

namespace {

Word word_of(std::initializer_list<int> ids) {
  Word w;
  w.letters.assign(ids);
  return w;
}

}  // namespace

TEST_CASE("exact orbit values") {
  auto sys = build_gallery("dyadic");
  auto x = PseudoOrbit::exact_orbit(sys.gens, Point{0.1});
  CHECK(x.value(word_of({1, 1})).value() == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(x.value(Word{}).value() == 0.1);
  CHECK(!x.value(word_of({1, 2})).has_value());  // 0.1 not in [0.5, 1)

  auto rot = build_gallery("rotation:0.25");
  auto y = PseudoOrbit::exact_orbit(rot.gens, Point{0.7});
  CHECK(y.value(word_of({1, 1, 1})).value() == doctest::Approx(0.45));

  CHECK(verify_pseudo_orbit(x, 5).ok);
  CHECK(verify_pseudo_orbit(x, 5).max_deviation <= 1e-15);
}

TEST_CASE("perturbed orbit construction and determinism") {
  auto sys = build_gallery("dyadic");
  const double alpha = 0.01;
  auto x = PseudoOrbit::perturbed_orbit(sys.gens, Point{0.2}, alpha, 12345);

  // alpha = 0 coincides with the exact orbit
  auto z = PseudoOrbit::perturbed_orbit(sys.gens, Point{0.2}, 0.0, 999);
  auto e = PseudoOrbit::exact_orbit(sys.gens, Point{0.2});
  for (const auto& [w, v] : e.materialize(4)) {
    auto vz = z.value(w);
    REQUIRE(vz.has_value());
    CHECK(*vz == v);
  }

  // verify at the constructed alpha
  auto rep = verify_pseudo_orbit(x, 5);
  CHECK(rep.ok);
  CHECK(rep.max_deviation <= alpha + 1e-15);
  CHECK(rep.max_deviation > 0.0);

  // same seed, re-evaluation is bit-identical
  auto x2 = PseudoOrbit::perturbed_orbit(sys.gens, Point{0.2}, alpha, 12345);
  Word node = word_of({1, 3});
  CHECK(x.value(node).value() == x2.value(node).value());
  CHECK(x.value(node).value() == x.value(node).value());

  // different seeds differ somewhere
  auto x3 = PseudoOrbit::perturbed_orbit(sys.gens, Point{0.2}, alpha, 54321);
  CHECK(x.value(node).value() != x3.value(node).value());
}

TEST_CASE("corrupted node is reported with its word") {
  auto sys = build_gallery("dyadic");
  const double alpha = 0.01;
  auto x = PseudoOrbit::perturbed_orbit(sys.gens, Point{0.2}, alpha, 7);
  auto bad = x.corrupted_at(2, 1, 2.0 * alpha);
  auto rep = verify_pseudo_orbit(bad, 3);
  CHECK(!rep.ok);
  REQUIRE(!rep.violations.empty());
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.word.length() == 2 && v.word.letters.front() == 1) found = true;
  CHECK(found);
}

TEST_CASE("shift by a word") {
  auto sys = build_gallery("dyadic");
  auto x = PseudoOrbit::exact_orbit(sys.gens, Point{0.1});
  Word g0 = word_of({1});

  auto shifted = x.shifted(g0);
  CHECK(shifted.base_point().coord == x.value(g0).value());

  // shift of an exact orbit is the exact orbit of the image point
  auto direct = PseudoOrbit::exact_orbit(sys.gens, Point{x.value(g0).value()});
  for (const auto& [w, v] : direct.materialize(4)) {
    auto vs = shifted.value(w);
    REQUIRE(vs.has_value());
    CHECK(*vs == v);
  }

  // shift by the empty word does nothing
  auto same = x.shifted(Word{});
  CHECK(same.base_point().coord == x.base_point().coord);

  // shifting outside the domain is a precondition failure
  CHECK_THROWS_AS(PseudoOrbit::exact_orbit(sys.gens, Point{0.7}).shifted(g0),
                  std::invalid_argument);
}

TEST_CASE("perturbed deviations stay within alpha over sampled nodes") {
  auto sys = build_gallery("dyadic");
  const double alpha = 0.003;
  uint64_t state = 17;
  double worst = 0.0;
  int nodes = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    state = splitmix64(state);
    auto x = PseudoOrbit::perturbed_orbit(sys.gens, Point{unit_from_key(state)},
                                          alpha, state);
    auto c = x.root();
    for (int step = 0; step < 8; ++step) {
      state = splitmix64(state);
      int id = static_cast<int>(state % 5);
      double before = c.value;
      auto cc = c;
      if (!x.step(cc, id)) continue;
      auto exact = sys.gens.apply_letter(id, before);
      REQUIRE(exact.has_value());
      worst = std::max(worst, sys.gens.space().distance(Point{*exact},
                                                        Point{cc.value}));
      c = cc;
      ++nodes;
    }
  }
  CHECK(nodes >= 1000);
  CHECK(worst <= alpha + 1e-15);
}

TEST_CASE("orbit pool seeding, canonical order, verification") {
  auto sys = build_gallery("dyadic");
  auto pool = OrbitPool::seeded_grid(sys.gens, 32, 0.005, 11);
  CHECK(pool.orbits.size() == 64);  // exact + perturbed per grid point
  for (size_t i = 0; i + 1 < pool.orbits.size(); ++i)
    CHECK(pool.orbits[i].base_point().coord <=
          pool.orbits[i + 1].base_point().coord);
  CHECK(pool.verify(3).ok);
}

TEST_CASE("serialization carries provenance and stream id") {
  auto sys = build_gallery("dyadic");
  auto x = PseudoOrbit::perturbed_orbit(sys.gens, Point{0.25}, 0.01, 77);
  auto j = x.to_json(3);
  CHECK(j["provenance"] == "perturbed");
  CHECK(j["seed"] == 77);
  CHECK(j["alpha"] == 0.01);
  CHECK(j["stream"] == "splitmix64-fold-v1");
  CHECK(j["materialized"].size() > 1);
}
