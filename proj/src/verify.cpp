#include "pgentropy/verify.hpp"

#include <algorithm>
#include <cmath>

#include "pgentropy/parallel.hpp"
#include "pgentropy/rng.hpp"
#include "pgentropy/ymetric.hpp"

namespace pge {

void SuiteReport::add(const std::string& name, bool pass, double margin,
                      const std::string& detail) {
  checks.push_back({name, pass, margin, detail});
  ok = ok && pass;
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name},
                   {"pass", c.pass},
                   {"margin", c.margin},
                   {"detail", c.detail}});
  return {{"suite", suite}, {"ok", ok}, {"checks", std::move(arr)}};
}

namespace {

// deterministic pseudo-random reduced word with both orbits' domains honored
Word random_common_word(const GeneratingSet& g, const PseudoOrbit& x,
                        const PseudoOrbit& y, int len, uint64_t& state) {
  auto cx = x.root();
  auto cy = y.root();
  std::vector<int> app;
  for (int step = 0; step < len; ++step) {
    std::vector<int> options;
    for (int id : g.letter_ids()) {
      if (cx.last_letter >= 0 && g.inverse(cx.last_letter) == id) continue;
      auto tx = cx;
      auto ty = cy;
      if (x.step(tx, id) && y.step(ty, id)) options.push_back(id);
    }
    if (options.empty()) break;
    state = splitmix64(state);
    int id = options[state % options.size()];
    x.step(cx, id);
    y.step(cy, id);
    app.push_back(id);
  }
  Word w;
  w.letters.assign(app.rbegin(), app.rend());
  return w;
}

}  // namespace

SuiteReport verify_metrics(uint64_t seed, int threads) {
  SuiteReport rep;
  rep.suite = "metrics";
  // The metric identities are exercised on the section-6 group action: its
  // generators are defined on the whole circle, so every reduced word lies in
  // every orbit's domain and the levelwise maxima of d0 are subadditive. On
  // partial-domain systems the d0 triangle inequality can genuinely fail
  // (level maxima range over pair-dependent word sets), which is why the
  // paper works with the chain metric d1 on Y_alpha.
  auto sys = build_gallery("section6");
  const int K = 12;
  const double alpha = 0.01;

  // 50-orbit perturbed pool
  OrbitPool pool;
  pool.gens = &sys.gens;
  pool.alpha = alpha;
  auto net = sys.gens.space().epsilon_net(1.0 / 50);
  for (size_t i = 0; i < net.size(); ++i)
    pool.orbits.push_back(PseudoOrbit::perturbed_orbit(
        sys.gens, net[i], alpha, splitmix64(seed ^ i)));
  pool.sort_canonical();

  PoolMetrics metrics(pool, K, threads);
  int n = metrics.size();

  // symmetry is exact by construction; recompute a sample of pairs reversed
  double sym_err = 0.0;
  for (int i = 0; i < n; i += 7)
    for (int j = i + 1; j < n; j += 11) {
      auto a = d0(pool.orbits[static_cast<size_t>(i)],
                  pool.orbits[static_cast<size_t>(j)], K);
      auto b = d0(pool.orbits[static_cast<size_t>(j)],
                  pool.orbits[static_cast<size_t>(i)], K);
      sym_err = std::max(sym_err, std::fabs(a.lower - b.lower));
    }
  rep.add("d0_symmetry_exact", sym_err == 0.0, -sym_err);

  double tri_margin = 1e300;
  bool tri_ok = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        double lhs = metrics.d0_at(i, k).lower;
        double rhs = metrics.d0_at(i, j).lower + metrics.d0_at(i, j).tail +
                     metrics.d0_at(j, k).lower + metrics.d0_at(j, k).tail;
        tri_margin = std::min(tri_margin, rhs - lhs + 1e-12);
        if (lhs > rhs + 1e-12) tri_ok = false;
      }
  rep.add("d0_triangle_within_tail", tri_ok, tri_margin,
          "all triples of a " + std::to_string(n) + "-orbit pool");

  double diag = 0.0;
  for (int i = 0; i < n; ++i)
    diag = std::max(diag, metrics.d1_upper(i, i).lower);
  rep.add("d1_upper_diagonal_zero", diag == 0.0, -diag);

  // monotonicity in K on sampled pairs
  bool mono_ok = true;
  double mono_margin = 1e300;
  for (int i = 0; i < n; i += 9) {
    int j = (i + 17) % n;
    if (i == j) continue;
    MetricValue prev;
    bool first = true;
    for (int kk : {4, 8, 12}) {
      auto v = d0(pool.orbits[static_cast<size_t>(i)],
                  pool.orbits[static_cast<size_t>(j)], kk);
      if (!first) {
        mono_ok = mono_ok && v.lower >= prev.lower - 1e-15 &&
                  v.lower + v.tail <= prev.lower + prev.tail + 1e-15;
        mono_margin = std::min(mono_margin, v.lower - prev.lower);
      }
      prev = v;
      first = false;
    }
  }
  rep.add("d0_monotone_in_K", mono_ok, mono_margin);

  // shift Lipschitz: d0(sigma_g x, sigma_g y) <= 2^|g| (d0(x,y) + tail);
  // truncated at K = 10 to keep a thousand section-6 pair trees affordable
  uint64_t state = splitmix64(seed ^ 0xABCDULL);
  const int shift_trials = 1000;
  const int K_shift = 10;
  std::vector<char> oks(shift_trials, 0);
  std::vector<double> margins(shift_trials, 0.0);
  parallel_for(shift_trials, threads, [&](int64_t tt) {
    uint64_t st = splitmix64(state + static_cast<uint64_t>(tt));
    int i = static_cast<int>(st % static_cast<uint64_t>(n));
    st = splitmix64(st);
    int j = static_cast<int>(st % static_cast<uint64_t>(n));
    if (i == j) j = (j + 1) % n;
    st = splitmix64(st);
    int len = static_cast<int>(st % 6);  // |g| <= 5
    const auto& x = pool.orbits[static_cast<size_t>(i)];
    const auto& y = pool.orbits[static_cast<size_t>(j)];
    Word g0 = random_common_word(*pool.gens, x, y, len, st);
    auto r = shift_lipschitz_check(x, y, g0, K_shift);
    oks[static_cast<size_t>(tt)] = r.ok ? 1 : 0;
    margins[static_cast<size_t>(tt)] = r.rhs - r.lhs;
  });
  bool shift_ok = true;
  double shift_margin = 1e300;
  for (int tt = 0; tt < shift_trials; ++tt) {
    shift_ok = shift_ok && oks[static_cast<size_t>(tt)];
    shift_margin = std::min(shift_margin, margins[static_cast<size_t>(tt)]);
  }
  rep.add("shift_lipschitz_2n", shift_ok, shift_margin,
          std::to_string(shift_trials) + " random pairs, |g| <= 5");

  // positivity surrogate: members differing at some word of length <= K have
  // d1_upper > 0
  bool pos_ok = true;
  for (int i = 0; i < n && pos_ok; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (metrics.d0_at(i, j).lower > 0 && metrics.d1_upper(i, j).lower <= 0) {
        pos_ok = false;
        break;
      }
    }
  rep.add("d1_positivity_surrogate", pos_ok, 0.0);

  // truncation depth invariant
  auto td = TruncationDepth::for_eps(sys.gens.space(), 0.125);
  bool td_ok = std::ldexp(1.0, -td.l_eps) < 0.125 / (2 * sys.gens.space().diameter()) &&
               std::ldexp(1.0, -(td.l_eps - 1)) >= 0.125 / (2 * sys.gens.space().diameter());
  rep.add("truncation_depth_minimal", td_ok, static_cast<double>(td.l_eps));

  // finite-net evidence for compactness: 200 seeded orbits, d0-net radius
  // 0.05 (dyadic system; the narrower word trees keep 200 orbits cheap)
  auto dyadic = build_gallery("dyadic");
  OrbitPool big;
  big.gens = &dyadic.gens;
  big.alpha = alpha;
  auto net200 = dyadic.gens.space().epsilon_net(1.0 / 200);
  for (size_t i = 0; i < net200.size(); ++i)
    big.orbits.push_back(PseudoOrbit::perturbed_orbit(
        dyadic.gens, net200[i], alpha, splitmix64(seed ^ (0x77ULL + i))));
  big.sort_canonical();
  const double radius = 0.05;
  std::vector<int> centers;
  for (int i = 0; i < static_cast<int>(big.orbits.size()); ++i) {
    bool covered = false;
    for (int c : centers) {
      auto v = d0(big.orbits[static_cast<size_t>(i)],
                  big.orbits[static_cast<size_t>(c)], K);
      if (v.lower + v.tail <= radius) {
        covered = true;
        break;
      }
    }
    if (!covered) centers.push_back(i);
  }
  rep.add("finite_net_evidence", !centers.empty(),
          static_cast<double>(centers.size()),
          "d0-net of radius 0.05 over 200 orbits has size " +
              std::to_string(centers.size()));
  return rep;
}

SuiteReport verify_orbits(uint64_t seed, int threads) {
  SuiteReport rep;
  rep.suite = "orbits";
  (void)threads;
  auto dyadic = build_gallery("dyadic");
  auto rotation = build_gallery("rotation:0.6180339887498949");

  for (const auto* sysp : {&dyadic, &rotation}) {
    const GallerySystem& sys = *sysp;
    const double L = sys.gens.max_lipschitz();
    const double alpha = 1e-4;
    uint64_t state = splitmix64(seed ^ fnv1a64(sys.name.data(), sys.name.size()));

    // sampled tolerance and the projection bound alpha*(1+L+...+L^{n-1})
    double max_ratio = 0.0;
    bool proj_ok = true;
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      state = splitmix64(state);
      Point base{unit_from_key(state)};
      auto x = PseudoOrbit::perturbed_orbit(sys.gens, base, alpha, state);
      auto ex = PseudoOrbit::exact_orbit(sys.gens, base);
      state = splitmix64(state);
      int len = 1 + static_cast<int>(state % 10);
      Word w = random_common_word(sys.gens, x, ex, len, state);
      if (w.length() == 0) continue;
      auto vx = x.value(w);
      auto ve = ex.value(w);
      if (!vx || !ve) continue;
      checked++;
      double bound = 0.0, Lk = 1.0;
      for (int k = 0; k < w.length(); ++k) {
        bound += Lk;
        Lk *= L;
      }
      bound *= alpha;
      double dev = sys.gens.space().distance(Point{*vx}, Point{*ve});
      if (dev > bound + 1e-9) proj_ok = false;
      max_ratio = std::max(max_ratio, bound > 0 ? dev / bound : 0.0);
    }
    rep.add("projection_bound_" + sys.name, proj_ok && checked > 500, max_ratio,
            std::to_string(checked) + " sampled words, n <= 10");

    // evaluation-order independence: value() vs a bfs materialization
    auto x = PseudoOrbit::perturbed_orbit(sys.gens, Point{0.3}, alpha, seed);
    auto nodes = x.materialize(5, 100000);
    bool lazy_ok = true;
    for (const auto& [w, v] : nodes) {
      auto direct = x.value(w);
      if (!direct || *direct != v) lazy_ok = false;
    }
    rep.add("lazy_eager_bit_identical_" + sys.name, lazy_ok, 0.0,
            std::to_string(nodes.size()) + " nodes");
  }

  // max edge deviation <= alpha over sampled nodes, both provenances
  auto sys = build_gallery("dyadic");
  const double alpha = 0.02;
  auto x = PseudoOrbit::perturbed_orbit(sys.gens, Point{0.15}, alpha, seed);
  auto v = verify_pseudo_orbit(x, 6);
  rep.add("perturbed_tolerance", v.ok && v.max_deviation <= alpha + 1e-12,
          alpha - v.max_deviation,
          std::to_string(v.nodes) + " tuple nodes, depth 6");

  auto ex = PseudoOrbit::exact_orbit(sys.gens, Point{0.15});
  auto ve = verify_pseudo_orbit(ex, 6);
  rep.add("exact_orbit_tolerance_zero", ve.ok && ve.max_deviation <= 1e-12,
          -ve.max_deviation);

  // corrupted node must be detected
  auto bad = x.corrupted_at(3, 1, 2.5 * alpha);
  auto vb = verify_pseudo_orbit(bad, 4);
  rep.add("corrupted_node_detected", !vb.ok,
          static_cast<double>(vb.violations.size()));

  // shift identities
  Word g0 = Word::single(1);
  auto sh = ex.shifted(g0);
  bool shift_ok =
      sh.base_point().coord == ex.value(g0).value() &&
      verify_pseudo_orbit(sh, 4).ok;
  auto sh_e = ex.shifted(Word{});
  shift_ok = shift_ok && sh_e.base_point().coord == ex.base_point().coord;
  rep.add("shift_identities", shift_ok, 0.0);

  return rep;
}

SuiteReport verify_section6(uint64_t seed, int threads) {
  SuiteReport rep;
  rep.suite = "section6";
  auto sys = build_gallery("section6");
  const auto& pair = *sys.pair;

  rep.add("hypotheses", sys.hypothesis->ok, sys.hypothesis->measured_delta,
          "measured delta=" + std::to_string(sys.hypothesis->measured_delta) +
              ", alpha0=" + std::to_string(sys.hypothesis->alpha0));

  const double eps = 0.1, alpha = 1e-3;
  int K = n_eps_alpha(eps, alpha, pair.delta);
  int depth = K + 1;
  const int trials = 1000;
  std::vector<double> margins(trials, 0.0);
  std::vector<double> finals(trials, 0.0);
  std::vector<char> oks(trials, 0);
  parallel_for(trials, threads, [&](int64_t t) {
    uint64_t st = splitmix64(seed + static_cast<uint64_t>(t) * 1000003ULL);
    Point x{unit_from_key(st)};
    st = splitmix64(st);
    int blen = 1 + static_cast<int>(st % 8);
    Word g;
    for (int i = 0; i < blen; ++i) {
      st = splitmix64(st);
      g.letters.push_back((st & 1) ? pair.f1_id : pair.f0_id);
    }
    auto adv = adversarial_pseudo_orbit(sys, x, g, alpha);
    auto r = check_branch_growth(sys, adv, depth, eps);
    oks[static_cast<size_t>(t)] = r.ok ? 1 : 0;
    margins[static_cast<size_t>(t)] = r.min_margin;
    finals[static_cast<size_t>(t)] = r.final_deviation;
  });
  bool growth_ok = true;
  double growth_margin = 1e300, final_min = 1e300;
  for (int t = 0; t < trials; ++t) {
    growth_ok = growth_ok && oks[static_cast<size_t>(t)];
    growth_margin = std::min(growth_margin, margins[static_cast<size_t>(t)]);
    final_min = std::min(final_min, finals[static_cast<size_t>(t)]);
  }
  rep.add("branch_growth_eq25", growth_ok, growth_margin,
          std::to_string(trials) + " random branches, depth " +
              std::to_string(depth));
  rep.add("branch_reaches_eps", final_min >= eps, final_min - eps);

  auto gap = gap_experiment(sys, 3, eps, alpha, 512, threads);
  rep.add("family_size_identity", gap.identity_ok,
          static_cast<double>(gap.pseudo_count - 8 * gap.base_count),
          "#A=" + std::to_string(gap.base_count) +
              " #A_alpha=" + std::to_string(gap.pseudo_count));
  rep.add("family_pairwise_separated", gap.separation_ok, gap.min_pair_margin,
          gap.failure);
  rep.add("counting_inequality", gap.inequality_ok, 0.0);
  return rep;
}

std::vector<SuiteReport> verify_all(uint64_t seed, int threads) {
  return {verify_metrics(seed, threads), verify_orbits(seed, threads),
          verify_section6(seed, threads)};
}

}  // namespace pge
