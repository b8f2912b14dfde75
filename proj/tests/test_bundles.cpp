#include "doctest.h"

#include "pgentropy/bundles.hpp"
#include "pgentropy/gallery.hpp"

using namespace pge;

TEST_CASE("entropy bounds") {
  HolonomyPresentation pres{{1.0, 2.0}};
  auto rep = entropy_bounds(pres, 0.7);
  CHECK(rep.lower == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(rep.upper == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(rep.ps_lower == rep.lower);
  CHECK(rep.ps_upper == rep.upper);

  // a = b collapses the interval
  auto even = entropy_bounds(HolonomyPresentation{{2.0, 2.0}}, 0.6);
  CHECK(even.lower == even.upper);
  CHECK(even.lower == doctest::Approx(0.3));

  auto zero = entropy_bounds(pres, 0.0);
  CHECK(zero.lower == 0.0);
  CHECK(zero.upper == 0.0);

  CHECK_THROWS_AS(entropy_bounds(HolonomyPresentation{{}}, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(entropy_bounds(HolonomyPresentation{{-1.0}}, 0.1),
                  std::invalid_argument);
}

TEST_CASE("rescale examples") {
  HolonomyPresentation pres{{1.0, 2.0}};
  auto rep = rescale_generators(pres, 10);
  REQUIRE(rep.exponents.size() == 2);
  CHECK(rep.exponents[0] == 10);
  CHECK(rep.exponents[1] == 5);
  REQUIRE(rep.new_lengths.size() == 4);
  CHECK(rep.new_lengths[0] == 10.0);
  CHECK(rep.new_lengths[1] == 11.0);
  CHECK(rep.new_lengths[2] == 10.0);
  CHECK(rep.new_lengths[3] == 12.0);
  CHECK(rep.a_prime == 12.0);
  CHECK(rep.b_prime == 10.0);
  CHECK(rep.ratio == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(rep.paper_bound_hi == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(rep.paper_bound_ok);

  auto single = rescale_generators(HolonomyPresentation{{1.0}}, 10);
  CHECK(single.a_prime == 11.0);
  CHECK(single.b_prime == 10.0);
  CHECK(single.ratio == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(single.paper_bound_ok);

  CHECK_THROWS_AS(rescale_generators(HolonomyPresentation{{3.0}}, 2),
                  std::invalid_argument);
}

TEST_CASE("rescale ratio trends to 1") {
  HolonomyPresentation pres{{1.0, 2.0, 3.0}};
  double prev = 1e9;
  for (int m : {10, 100, 1000}) {
    auto rep = rescale_generators(pres, m);
    CHECK(rep.ratio >= 1.0);
    CHECK(rep.ratio < prev);
    prev = rep.ratio;
  }
  CHECK(prev < 1.01);
}

TEST_CASE("suspension with an isometric fiber action has zero entropy") {
  auto rot = build_gallery("rotation:0.6180339887498949");
  HolonomyPresentation pres{{1.0, 2.0}};
  SuspensionParams params;
  params.n_lo = 0;
  params.n_hi = 5;
  params.grid = 512;
  params.eps_grid = {1.0 / 16};
  auto rep = suspension_entropy(pres, rot.gens, params);
  CHECK(rep.bounds.lower == doctest::Approx(0.0));
  CHECK(rep.bounds.upper == doctest::Approx(0.0));
}

TEST_CASE("suspension with an expanding fiber action") {
  auto dy = build_gallery("dyadic");
  HolonomyPresentation pres{{1.0, 1.0}};
  SuspensionParams params;
  params.n_lo = 2;
  params.n_hi = 7;
  params.grid = 2048;
  params.eps_grid = {1.0 / 32};
  auto rep = suspension_entropy(pres, dy.gens, params);
  // lengths {1,1}: degenerate interval [h_est, h_est]
  CHECK(rep.bounds.lower == rep.bounds.upper);
  CHECK(rep.bounds.lower > 0.5);
  CHECK(rep.bounds.lower < 0.85);
}
