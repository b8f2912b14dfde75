#include "doctest.h"

#include <cmath>

#include "pgentropy/gallery.hpp"
#include "pgentropy/rng.hpp"

using namespace pge;

TEST_CASE("gallery construction basics") {
  auto id = build_gallery("identity");
  CHECK(id.gens.size() == 1);
  CHECK(id.gens.max_lipschitz() == 1.0);

  auto dy = build_gallery("dyadic");
  CHECK(dy.gens.size() == 5);
  CHECK(dy.gens.max_lipschitz() == 2.0);

  auto rot = build_gallery("rotation:0.25");
  CHECK(rot.gens.size() == 3);
  CHECK(rot.gens.max_lipschitz() == 1.0);

  CHECK_THROWS_AS(build_gallery("nope"), std::invalid_argument);
  CHECK_THROWS_AS(build_gallery("rotation:1.5"), std::invalid_argument);
}

TEST_CASE("section6 system passes its hypothesis suite") {
  auto sys = build_gallery("section6");
  REQUIRE(sys.pair.has_value());
  REQUIRE(sys.hypothesis.has_value());
  CHECK(sys.hypothesis->ok);
  // plateaus run at slope 1.2, so the measured margin is about 0.2
  CHECK(sys.hypothesis->measured_delta >= 0.15);
  CHECK(sys.hypothesis->measured_delta <= 0.25);
  CHECK(sys.pair->delta == doctest::Approx(0.15));
  CHECK(sys.pair->alpha0 == doctest::Approx(0.12));

  // fixed points as configured
  const auto& g = sys.gens;
  auto f0 = [&](double t) { return *g.apply_letter(sys.pair->f0_id, t); };
  auto f1 = [&](double t) { return *g.apply_letter(sys.pair->f1_id, t); };
  CHECK(f0(sys.pair->p0) == doctest::Approx(sys.pair->p0).epsilon(1e-12));
  CHECK(f0(sys.pair->q0) == doctest::Approx(sys.pair->q0).epsilon(1e-12));
  CHECK(f1(sys.pair->p1) == doctest::Approx(sys.pair->p1).epsilon(1e-12));
  CHECK(f1(sys.pair->q1) == doctest::Approx(sys.pair->q1).epsilon(1e-12));

  // inverses compose to the identity
  uint64_t state = 3;
  for (int t = 0; t < 200; ++t) {
    state = splitmix64(state);
    double u = unit_from_key(state);
    double v = *g.apply_letter(2, *g.apply_letter(1, u));
    CHECK(g.space().distance(Point{u}, Point{v}) <= 1e-12);
    double w = *g.apply_letter(4, *g.apply_letter(3, u));
    CHECK(g.space().distance(Point{u}, Point{w}) <= 1e-12);
  }
}

TEST_CASE("n_eps_alpha") {
  CHECK(n_eps_alpha(0.1, 0.001, 0.2) == 25);
  CHECK(n_eps_alpha(0.1, 0.1, 0.2) == 0);
  // halving alpha adds floor-steps of log2/log(1+delta)
  int prev = n_eps_alpha(0.1, 0.001, 0.2);
  int next = n_eps_alpha(0.1, 0.0005, 0.2);
  CHECK(next >= prev + 3);
  CHECK(next <= prev + 4);
  CHECK_THROWS_AS(n_eps_alpha(0.1, 0.2, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(n_eps_alpha(0.1, 0.0, 0.2), std::invalid_argument);
}

TEST_CASE("adversarial orbit: roster values") {
  auto sys = build_gallery("section6");
  const auto& pair = *sys.pair;
  const double alpha = 1e-3;
  Point x{0.33};
  Word g;
  g.letters = {pair.f0_id, pair.f1_id};  // g = f0 . f1, applied right to left

  auto adv = adversarial_pseudo_orbit(sys, x, g, alpha);
  auto exact = PseudoOrbit::exact_orbit(sys.gens, x);

  // alpha = 0 coincides with the exact orbit everywhere
  auto adv0 = adversarial_pseudo_orbit(sys, x, g, 0.0);
  for (const auto& [w, v] : exact.materialize(4)) {
    auto va = adv0.value(w);
    REQUIRE(va.has_value());
    CHECK(*va == v);
  }

  // roster (1): exact values at all words of length <= |g|
  for (const auto& [w, v] : exact.materialize(2)) {
    auto va = adv.value(w);
    REQUIRE(va.has_value());
    CHECK(*va == v);
  }

  // roster (2): the first branch node deviates by exactly alpha, with the
  // letter selected by the U0 membership test
  double gx = *exact.value(g);
  int h1 = pair.tmpl->in_u0(gx) ? pair.f0_id : pair.f1_id;
  Word branch1 = Word::concat(Word::single(h1), g);
  double expect = *sys.gens.apply_letter(h1, gx) + alpha;
  expect -= std::floor(expect);
  CHECK(adv.value(branch1).value() == doctest::Approx(expect).epsilon(1e-15));
  double dev = sys.gens.space().distance(
      Point{adv.value(branch1).value()},
      Point{*sys.gens.apply_letter(h1, gx)});
  CHECK(dev == doctest::Approx(alpha).epsilon(1e-9));

  // off-branch words continue exactly: verify the whole orbit at alpha
  auto rep = verify_pseudo_orbit(adv, 4);
  CHECK(rep.ok);
  CHECK(rep.max_deviation <= alpha + 1e-15);

  // a wrong branch letter at the base drops to the exact continuation
  int other = h1 == pair.f0_id ? pair.f1_id : pair.f0_id;
  Word off = Word::concat(Word::single(other), g);
  CHECK(adv.value(off).value() ==
        doctest::Approx(*sys.gens.apply_letter(other, gx)).epsilon(1e-15));
}

TEST_CASE("branch growth satisfies the displayed bounds") {
  auto sys = build_gallery("section6");
  const auto& pair = *sys.pair;
  const double eps = 0.1, alpha = 1e-3;
  int K = n_eps_alpha(eps, alpha, pair.delta);

  Word g;
  g.letters = {pair.f0_id};
  auto adv = adversarial_pseudo_orbit(sys, Point{0.61}, g, alpha);
  auto rep = check_branch_growth(sys, adv, K + 1, eps);
  CHECK(rep.ok);
  CHECK(!rep.vacuous);
  CHECK(rep.final_deviation >= eps);
  CHECK(rep.violations.empty());

  // alpha = 0 is vacuous and flagged
  auto adv0 = adversarial_pseudo_orbit(sys, Point{0.61}, g, 0.0);
  CHECK(check_branch_growth(sys, adv0, 5).vacuous);
}

TEST_CASE("strongly separated: adversarial vs its exact orbit") {
  auto sys = build_gallery("section6");
  const auto& pair = *sys.pair;
  const double eps = 0.1, alpha = 1e-3;
  int K = n_eps_alpha(eps, alpha, pair.delta);
  Word g;
  g.letters = {pair.f1_id, pair.f0_id, pair.f0_id};
  auto adv = adversarial_pseudo_orbit(sys, Point{0.27}, g, alpha);
  auto exact = PseudoOrbit::exact_orbit(sys.gens, Point{0.27});
  int depth = g.length() + K + 1;
  auto r = strongly_separated(adv, exact, {depth, eps});
  CHECK(r.separated);
}

TEST_CASE("gap experiment: identities and separation at n = 3") {
  auto sys = build_gallery("section6");
  auto rep = gap_experiment(sys, 3, 0.1, 1e-3, 512, 2);
  CHECK(rep.identity_ok);
  CHECK(rep.pseudo_count == 8 * rep.base_count);
  CHECK(rep.separation_ok);
  CHECK(rep.inequality_ok);
  CHECK(rep.min_pair_margin >= 0.0);
  CHECK(rep.base_count >= 2);
  CHECK(rep.separation_length == 3 + rep.n_eps_alpha + 1);
}

TEST_CASE("gap series: slope gap equals log 2 by the family construction") {
  auto sys = build_gallery("section6");
  auto series = gap_series(sys, 3, 5, 0.1, 1e-3, 256, 2);
  CHECK(series.slope_gap == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  for (const auto& r : series.reports) {
    CHECK(r.identity_ok);
    CHECK(r.separation_ok);
  }
}
