#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "pgentropy/rng.hpp"
#include "pgentropy/space.hpp"

using namespace pge;

TEST_CASE("distance examples") {
  CompactSpace circle(SpaceKind::circle);
  CompactSpace interval(SpaceKind::interval);
  CHECK(circle.distance(Point{0.1}, Point{0.9}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(interval.distance(Point{0.25}, Point{0.75}) == doctest::Approx(0.5));
  CHECK(circle.distance(Point{0.37}, Point{0.37}) == 0.0);
  CHECK(interval.distance(Point{0.4}, Point{0.4}) == 0.0);
}

TEST_CASE("diameters") {
  CHECK(CompactSpace(SpaceKind::circle).diameter() == 0.5);
  CHECK(CompactSpace(SpaceKind::interval).diameter() == 1.0);
}

TEST_CASE("metric axioms on sampled triples") {
  for (SpaceKind kind : {SpaceKind::circle, SpaceKind::interval}) {
    CompactSpace space(kind);
    uint64_t state = 42;
    for (int trial = 0; trial < 10000; ++trial) {
      state = splitmix64(state);
      Point a = space.reduce(unit_from_key(state));
      state = splitmix64(state);
      Point b = space.reduce(unit_from_key(state));
      state = splitmix64(state);
      Point c = space.reduce(unit_from_key(state));
      double ab = space.distance(a, b);
      double ba = space.distance(b, a);
      CHECK(ab == ba);
      CHECK(ab >= 0.0);
      CHECK(ab <= space.diameter() + 1e-15);
      CHECK(space.distance(a, c) <= ab + space.distance(b, c) + 1e-15);
      if (a.coord == b.coord) CHECK(ab == 0.0);
      if (ab == 0.0) CHECK(a.coord == b.coord);
    }
  }
}

TEST_CASE("circle reduction is canonical floor-subtract") {
  CompactSpace circle(SpaceKind::circle);
  CHECK(circle.reduce(1.0).coord == 0.0);
  CHECK(circle.reduce(2.25).coord == doctest::Approx(0.25));
  CHECK(circle.reduce(-0.25).coord == doctest::Approx(0.75));
  CHECK(circle.reduce(0.0).coord == 0.0);
  CompactSpace interval(SpaceKind::interval);
  CHECK(interval.reduce(1.25).coord == 1.0);
  CHECK(interval.reduce(-0.5).coord == 0.0);
}

TEST_CASE("epsilon_net examples") {
  CompactSpace circle(SpaceKind::circle);
  auto net = circle.epsilon_net(0.25);
  REQUIRE(net.size() == 4);
  CHECK(net[0].coord == 0.0);
  CHECK(net[1].coord == 0.25);
  CHECK(net[2].coord == 0.5);
  CHECK(net[3].coord == 0.75);

  CompactSpace interval(SpaceKind::interval);
  auto inet = interval.epsilon_net(0.5);
  REQUIRE(inet.size() == 3);
  CHECK(inet[0].coord == 0.0);
  CHECK(inet[1].coord == 0.5);
  CHECK(inet[2].coord == 1.0);

  // net size = ceil(1/eps) on the circle
  CHECK(circle.epsilon_net(0.3).size() == 4);
  CHECK(circle.epsilon_net(1.0 / 65536).size() == 65536);

  CHECK_THROWS_AS(circle.epsilon_net(0.0), std::invalid_argument);
  CHECK_THROWS_AS(circle.epsilon_net(-1.0), std::invalid_argument);
}

TEST_CASE("epsilon_net covering property") {
  for (SpaceKind kind : {SpaceKind::circle, SpaceKind::interval}) {
    CompactSpace space(kind);
    for (double eps : {0.25, 0.013, 0.001}) {
      auto net = space.epsilon_net(eps);
      uint64_t state = 7;
      for (int trial = 0; trial < 1000; ++trial) {
        state = splitmix64(state);
        Point p = space.reduce(unit_from_key(state));
        double best = 1.0;
        for (const auto& q : net) best = std::min(best, space.distance(p, q));
        CHECK(best <= eps + 1e-15);
      }
    }
  }
}
