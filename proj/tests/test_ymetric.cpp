#include "doctest.h"

#include <cmath>

#include "pgentropy/gallery.hpp"
#include "pgentropy/rng.hpp"
#include "pgentropy/ymetric.hpp"

using namespace pge;

namespace {

// Independent oracle: d0 by direct summation over the reduced word tree,
// recursion on words instead of cursors.
double d0_direct(const GeneratingSet& gens, const PseudoOrbit& x,
                 const PseudoOrbit& y, int K) {
  std::vector<double> level_max(static_cast<size_t>(K) + 1, 0.0);
  struct Rec {
    const GeneratingSet& g;
    const PseudoOrbit& x;
    const PseudoOrbit& y;
    std::vector<double>& lvl;
    int K;
    void walk(const Word& w, int depth) {
      auto vx = x.value(w);
      auto vy = y.value(w);
      if (!vx || !vy) return;
      lvl[static_cast<size_t>(depth)] =
          std::max(lvl[static_cast<size_t>(depth)],
                   g.space().distance(Point{*vx}, Point{*vy}));
      if (depth == K) return;
      for (int id : g.letter_ids()) {
        if (!w.letters.empty() && g.inverse(w.letters.front()) == id) continue;
        walk(Word::concat(Word::single(id), w), depth + 1);
      }
    }
  } rec{gens, x, y, level_max, K};
  rec.walk(Word{}, 0);
  double total = 0.0, running = 0.0;
  for (int k = 0; k <= K; ++k) {
    running = std::max(running, level_max[static_cast<size_t>(k)]);
    total += std::ldexp(running, -k);
  }
  return total;
}

}  // namespace

TEST_CASE("truncation depth satisfies the tail bound") {
  CompactSpace circle(SpaceKind::circle);
  for (double eps : {0.5, 0.1, 0.01, 0.001}) {
    auto td = TruncationDepth::for_eps(circle, eps);
    CHECK(std::ldexp(1.0, -td.l_eps) < eps / (2 * circle.diameter()));
    CHECK(std::ldexp(1.0, -(td.l_eps - 1)) >= eps / (2 * circle.diameter()));
  }
}

TEST_CASE("d0 of an orbit with itself is zero") {
  auto sys = build_gallery("dyadic");
  auto x = PseudoOrbit::exact_orbit(sys.gens, Point{0.3});
  auto v = d0(x, x, 8);
  CHECK(v.lower == 0.0);
  CHECK(v.tail == doctest::Approx(std::ldexp(0.5, -8)));
}

TEST_CASE("identity-only system: d0 is the geometric series 2 d(p,q)") {
  auto sys = build_gallery("identity");
  auto x = PseudoOrbit::exact_orbit(sys.gens, Point{0.2});
  auto y = PseudoOrbit::exact_orbit(sys.gens, Point{0.3});
  auto v = d0(x, y, 20);
  // sum_{k<=K} 2^-k * 0.1 -> 2 * 0.1 up to the tail
  CHECK(v.lower == doctest::Approx(0.2).epsilon(1e-5));
  CHECK(v.lower <= 0.2);
  CHECK(0.2 <= v.lower + v.tail + 1e-15);
}

TEST_CASE("dyadic d0 regression against direct summation") {
  auto sys = build_gallery("dyadic");
  auto x = PseudoOrbit::exact_orbit(sys.gens, Point{0.1});
  auto y = PseudoOrbit::exact_orbit(sys.gens, Point{0.15});
  const int K = 10;
  double oracle = d0_direct(sys.gens, x, y, K);
  auto v = d0(x, y, K);
  CHECK(v.lower == doctest::Approx(oracle).epsilon(1e-14));
  // frozen regression constant, computed by the direct-summation oracle
  CHECK(v.lower == doctest::Approx(0.1998046875).epsilon(1e-12));
}

TEST_CASE("d0 monotone in K: lower up, lower+tail down") {
  auto sys = build_gallery("dyadic");
  auto x = PseudoOrbit::perturbed_orbit(sys.gens, Point{0.21}, 0.01, 5);
  auto y = PseudoOrbit::perturbed_orbit(sys.gens, Point{0.27}, 0.01, 6);
  MetricValue prev;
  bool first = true;
  for (int K : {2, 4, 6, 8, 10, 12}) {
    auto v = d0(x, y, K);
    if (!first) {
      CHECK(v.lower >= prev.lower - 1e-15);
      CHECK(v.lower + v.tail <= prev.lower + prev.tail + 1e-15);
    }
    prev = v;
    first = false;
  }
}

TEST_CASE("d1_upper basics on a pool") {
  auto sys = build_gallery("dyadic");
  OrbitPool pool;
  pool.gens = &sys.gens;
  pool.alpha = 0.01;
  for (int i = 0; i < 8; ++i)
    pool.orbits.push_back(PseudoOrbit::perturbed_orbit(
        sys.gens, Point{i / 8.0}, 0.01, splitmix64(static_cast<uint64_t>(i))));
  pool.sort_canonical();
  const int K = 8;
  PoolMetrics m(pool, K);

  for (int i = 0; i < m.size(); ++i) CHECK(m.d1_upper(i, i).lower == 0.0);

  // two-point pool: d1 equals d0
  OrbitPool two;
  two.gens = &sys.gens;
  two.alpha = 0.01;
  two.orbits = {pool.orbits[0], pool.orbits[5]};
  PoolMetrics m2(two, K);
  auto direct = d0(two.orbits[0], two.orbits[1], K);
  CHECK(m2.d1_upper(0, 1).lower == doctest::Approx(direct.lower));

  // a richer pool never increases the chain value
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j)
      CHECK(m.d1_upper(i, j).lower <= m.d0_at(i, j).lower + 1e-15);

  // positivity surrogate: distinct values at some word => d1_upper > 0
  for (int i = 0; i < m.size(); ++i)
    for (int j = i + 1; j < m.size(); ++j)
      if (m.d0_at(i, j).lower > 0) CHECK(m.d1_upper(i, j).lower > 0.0);
}

TEST_CASE("shift estimate d0(sigma x, sigma y) <= 2^n d0(x,y)") {
  auto sys = build_gallery("dyadic");
  // g0 = b0^3 applied to orbits based in its domain
  Word g0;
  g0.letters.assign(3, 1);
  auto x = PseudoOrbit::perturbed_orbit(sys.gens, Point{0.02}, 0.002, 21);
  auto y = PseudoOrbit::perturbed_orbit(sys.gens, Point{0.05}, 0.002, 22);
  auto rep = shift_lipschitz_check(x, y, g0, 10);
  CHECK(rep.ok);
  CHECK(rep.n == 3);

  // empty shift: trivial bound
  auto rep0 = shift_lipschitz_check(x, y, Word{}, 10);
  CHECK(rep0.ok);
  CHECK(rep0.lhs <= rep0.rhs);

  // x = y: both sides zero
  auto repxx = shift_lipschitz_check(x, x, g0, 10);
  CHECK(repxx.lhs == 0.0);
  CHECK(repxx.ok);
}
