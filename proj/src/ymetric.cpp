#include "pgentropy/ymetric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pgentropy/parallel.hpp"

namespace pge {

TruncationDepth TruncationDepth::for_eps(const CompactSpace& space, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("truncation: eps must be > 0");
  double bound = eps / (2.0 * space.diameter());
  int l = 0;
  while (std::ldexp(1.0, -l) >= bound && l < 1022) ++l;
  return TruncationDepth{l, eps};
}

namespace {

void d0_rec(const PseudoOrbit& x, const PseudoOrbit& y,
            const PseudoOrbit::Cursor& cx, const PseudoOrbit::Cursor& cy,
            int depth, int K, std::vector<double>& level_max) {
  const GeneratingSet& g = x.gens();
  double d = g.space().distance(Point{cx.value}, Point{cy.value});
  level_max[static_cast<size_t>(depth)] =
      std::max(level_max[static_cast<size_t>(depth)], d);
  if (depth == K) return;
  int last = cx.last_letter;
  for (int id : g.letter_ids()) {
    if (last >= 0 && g.inverse(last) == id) continue;
    PseudoOrbit::Cursor nx = cx, ny = cy;
    if (!x.step(nx, id) || !y.step(ny, id)) continue;
    d0_rec(x, y, nx, ny, depth + 1, K, level_max);
  }
}

}  // namespace

MetricValue d0(const PseudoOrbit& x, const PseudoOrbit& y, int K) {
  if (K < 0) throw std::invalid_argument("d0: K must be >= 0");
  std::vector<double> level_max(static_cast<size_t>(K) + 1, 0.0);
  d0_rec(x, y, x.root(), y.root(), 0, K, level_max);
  double lower = 0.0, running = 0.0;
  for (int k = 0; k <= K; ++k) {
    running = std::max(running, level_max[static_cast<size_t>(k)]);
    lower += std::ldexp(running, -k);
  }
  double diam = x.gens().space().diameter();
  return MetricValue{lower, std::ldexp(diam, -K), K};
}

PoolMetrics::PoolMetrics(const OrbitPool& pool, int K, int threads)
    : n_(static_cast<int>(pool.orbits.size())), K_(K) {
  tail_ = std::ldexp(pool.gens->space().diameter(), -K);
  size_t n = static_cast<size_t>(n_);
  d0_.assign(n * n, MetricValue{0.0, tail_, K});
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) pairs.emplace_back(i, j);
  std::vector<MetricValue> vals(pairs.size());
  parallel_for(static_cast<int64_t>(pairs.size()), threads, [&](int64_t k) {
    auto [i, j] = pairs[static_cast<size_t>(k)];
    vals[static_cast<size_t>(k)] = d0(pool.orbits[static_cast<size_t>(i)],
                                      pool.orbits[static_cast<size_t>(j)], K);
  });
  for (size_t k = 0; k < pairs.size(); ++k) {
    auto [i, j] = pairs[k];
    d0_[static_cast<size_t>(i) * n + static_cast<size_t>(j)] = vals[k];
    d0_[static_cast<size_t>(j) * n + static_cast<size_t>(i)] = vals[k];
  }
  closure_lower_.resize(n * n);
  closure_upper_.resize(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      closure_lower_[i * n + j] = (i == j) ? 0.0 : d0_[i * n + j].lower;
      closure_upper_[i * n + j] = (i == j) ? 0.0 : d0_[i * n + j].lower + tail_;
    }
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        closure_lower_[i * n + j] = std::min(
            closure_lower_[i * n + j],
            closure_lower_[i * n + k] + closure_lower_[k * n + j]);
        closure_upper_[i * n + j] = std::min(
            closure_upper_[i * n + j],
            closure_upper_[i * n + k] + closure_upper_[k * n + j]);
      }
}

MetricValue PoolMetrics::d1_upper(int i, int j) const {
  size_t n = static_cast<size_t>(n_);
  double lo = closure_lower_[static_cast<size_t>(i) * n + static_cast<size_t>(j)];
  double up = closure_upper_[static_cast<size_t>(i) * n + static_cast<size_t>(j)];
  return MetricValue{lo, up - lo, K_};
}

MetricValue d1_upper(const OrbitPool& pool, int i, int j, int K) {
  PoolMetrics m(pool, K);
  return m.d1_upper(i, j);
}

ShiftLipschitzReport shift_lipschitz_check(const PseudoOrbit& x,
                                           const PseudoOrbit& y, const Word& g0,
                                           int K) {
  ShiftLipschitzReport rep;
  rep.n = g0.length();
  MetricValue base = d0(x, y, K);
  MetricValue shifted = d0(x.shifted(g0), y.shifted(g0), K);
  rep.lhs = shifted.lower;
  rep.rhs = std::ldexp(base.lower + base.tail, rep.n) + 1e-9;
  rep.ok = rep.lhs <= rep.rhs;
  return rep;
}

}  // namespace pge
