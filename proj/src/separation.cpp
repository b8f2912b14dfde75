#include "pgentropy/separation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "pgentropy/parallel.hpp"
#include "pgentropy/rng.hpp"

namespace pge {

namespace {

struct SearchStats {
  int64_t nodes = 0;
};

// Depth-first witness search over the reduced pair tree. Pruning uses the
// linear coordinate gap: for monotone piece formulas a non-wrap exact pair
// can never widen past gap * Lmax^r, and never becomes a wrap pair while that
// bound stays below eps <= 1/2, so cutting is sound for exact orbits. Pairs
// with per-step noise additionally keep a guard zone around coordinate
// discontinuities (dyadic-style unfoldings), where pruning is disabled.
class PairSearch {
 public:
  PairSearch(const PseudoOrbit& x, const PseudoOrbit& y,
             const SeparationParams& params)
      : x_(x), y_(y), g_(x.gens()), eps_(params.eps), max_n_(params.n) {
    circle_ = g_.space().kind() == SpaceKind::circle;
    pad_step_ = x.alpha() + y.alpha();
    double lmax = g_.max_lipschitz();
    pow_.resize(static_cast<size_t>(max_n_) + 1);
    pad_.resize(static_cast<size_t>(max_n_) + 1);
    pow_[0] = 1.0;
    pad_[0] = 0.0;
    for (int r = 1; r <= max_n_; ++r) {
      pow_[static_cast<size_t>(r)] = pow_[static_cast<size_t>(r) - 1] * lmax;
      pad_[static_cast<size_t>(r)] =
          pad_[static_cast<size_t>(r) - 1] * lmax + pad_step_;
    }
  }

  // Fast existence search: checks separation at every node, first hit wins.
  bool fused(SearchStats& st, std::vector<int>* witness_app) {
    auto cx = x_.root();
    auto cy = y_.root();
    stack_.clear();
    return fused_rec(cx, cy, max_n_, st, witness_app);
  }

  // Canonical search: iterative deepening, so the witness is the first word
  // in (length, application-order lexicographic) order.
  bool canonical(SearchStats& st, std::vector<int>* witness_app) {
    for (int target = 0; target <= max_n_; ++target) {
      auto cx = x_.root();
      auto cy = y_.root();
      stack_.clear();
      if (fixed_rec(cx, cy, target, st, witness_app)) return true;
    }
    return false;
  }

 private:
  double dist(double a, double b) const {
    double d = std::fabs(a - b);
    if (circle_) return std::min(d, 1.0 - d);
    return d;
  }

  bool prune(double vx, double vy, int remaining) const {
    double dlin = std::fabs(vx - vy);
    if (circle_ && dlin > 0.45) return false;  // wrap pairs stay live
    double reach = dlin * pow_[static_cast<size_t>(remaining)] +
                   pad_[static_cast<size_t>(remaining)];
    if (reach >= eps_) return false;
    if (pad_step_ > 0.0) {
      for (double j : g_.jump_points()) {
        if (dist(vx, j) <= eps_ || dist(vy, j) <= eps_) return false;
      }
    }
    return true;
  }

  bool fused_rec(const PseudoOrbit::Cursor& cx, const PseudoOrbit::Cursor& cy,
                 int remaining, SearchStats& st, std::vector<int>* witness) {
    st.nodes++;
    if (dist(cx.value, cy.value) >= eps_) {
      if (witness) *witness = stack_;
      return true;
    }
    if (remaining == 0) return false;
    int last = cx.last_letter;
    for (int id : g_.letter_ids()) {
      if (last >= 0 && g_.inverse(last) == id) continue;
      PseudoOrbit::Cursor nx = cx, ny = cy;
      if (!x_.step(nx, id) || !y_.step(ny, id)) continue;
      if (prune(nx.value, ny.value, remaining - 1)) continue;
      stack_.push_back(id);
      if (fused_rec(nx, ny, remaining - 1, st, witness)) return true;
      stack_.pop_back();
    }
    return false;
  }

  bool fixed_rec(const PseudoOrbit::Cursor& cx, const PseudoOrbit::Cursor& cy,
                 int target, SearchStats& st, std::vector<int>* witness) {
    st.nodes++;
    if (target == 0) {
      if (dist(cx.value, cy.value) >= eps_) {
        if (witness) *witness = stack_;
        return true;
      }
      return false;
    }
    int last = cx.last_letter;
    for (int id : g_.letter_ids()) {
      if (last >= 0 && g_.inverse(last) == id) continue;
      PseudoOrbit::Cursor nx = cx, ny = cy;
      if (!x_.step(nx, id) || !y_.step(ny, id)) continue;
      if (prune(nx.value, ny.value, target - 1)) continue;
      stack_.push_back(id);
      if (fixed_rec(nx, ny, target - 1, st, witness)) return true;
      stack_.pop_back();
    }
    return false;
  }

  const PseudoOrbit& x_;
  const PseudoOrbit& y_;
  const GeneratingSet& g_;
  double eps_;
  int max_n_;
  bool circle_;
  double pad_step_;
  std::vector<double> pow_, pad_;
  std::vector<int> stack_;  // application order
};

// Walks the distinguished branch of an adversarial orbit `a` (base word, then
// the U-selected expanding letters) on both orbits, looking for a prefix at
// which they are eps-apart. Resolves the deep separations of the section-6
// families without tree search.
bool probe_branch(const PseudoOrbit& a, const PseudoOrbit& x,
                  const PseudoOrbit& y, const SeparationParams& params,
                  std::vector<int>* witness_app, SearchStats& st) {
  const AdversarialTemplate* t = a.adversarial();
  if (!t) return false;
  const GeneratingSet& g = x.gens();
  bool circle = g.space().kind() == SpaceKind::circle;
  auto dist = [&](double u, double v) {
    double d = std::fabs(u - v);
    return circle ? std::min(d, 1.0 - d) : d;
  };
  auto ca = a.root();
  auto cx = x.root();
  auto cy = y.root();
  std::vector<int> letters;
  const auto& base = a.branch_base().letters;
  for (int step = 0; step < params.n; ++step) {
    int id;
    if (step < static_cast<int>(base.size()))
      id = base[base.size() - 1 - static_cast<size_t>(step)];
    else
      id = t->chosen_letter(ca.value);
    st.nodes++;
    if (!a.step(ca, id) || !x.step(cx, id) || !y.step(cy, id)) return false;
    letters.push_back(id);
    if (dist(cx.value, cy.value) >= params.eps) {
      if (witness_app) *witness_app = letters;
      return true;
    }
  }
  return false;
}

Word word_from_app(const std::vector<int>& app) {
  Word w;
  w.letters.assign(app.rbegin(), app.rend());
  return w;
}

SeparationResult orbit_pair_test(const PseudoOrbit& x, const PseudoOrbit& y,
                                 const SeparationParams& params, bool canonical,
                                 bool probes) {
  SeparationResult res;
  SearchStats st;
  std::vector<int> app;
  if (probes) {
    bool hit = false;
    if (x.provenance() == PseudoOrbit::Provenance::adversarial)
      hit = probe_branch(x, x, y, params, &app, st);
    if (!hit && y.provenance() == PseudoOrbit::Provenance::adversarial)
      hit = probe_branch(y, x, y, params, &app, st);
    if (!hit && x.base_point().coord != y.base_point().coord) {
      // Distinct bases usually separate through a short base witness at which
      // both orbits carry exact roster values; verify by direct evaluation.
      const GeneratingSet& g = x.gens();
      SeparationParams base_params{std::min(params.n, 12), params.eps};
      auto bw = separated(g, x.base_point(), y.base_point(), base_params);
      st.nodes += bw.nodes;
      if (bw.separated) {
        auto vx = x.value(bw.witness);
        auto vy = y.value(bw.witness);
        if (vx && vy && g.space().distance(Point{*vx}, Point{*vy}) >=
                            params.eps - 1e-12) {
          hit = true;
          app.assign(bw.witness.letters.rbegin(), bw.witness.letters.rend());
        }
      }
    }
    if (hit) {
      res.separated = true;
      res.witness = word_from_app(app);
      res.nodes = st.nodes;
      return res;
    }
  }
  PairSearch search(x, y, params);
  bool found = canonical ? search.canonical(st, &app) : search.fused(st, &app);
  res.separated = found;
  if (found) res.witness = word_from_app(app);
  res.nodes = st.nodes;
  return res;
}

struct GreedyOut {
  std::vector<int> kept;
  int max_witness_len = 0;
  int64_t pair_tests = 0;
  int64_t nodes = 0;
};

// Sequential greedy over orbits sorted by base coordinate. Members whose base
// points are >= eps apart are separated by the identity word, so only the
// eps-window around each candidate is tested.
GreedyOut greedy_separated(const std::vector<PseudoOrbit>& orbits,
                           const SeparationParams& params, bool probes) {
  GreedyOut out;
  if (orbits.empty()) return out;
  const GeneratingSet& g = orbits[0].gens();
  bool circle = g.space().kind() == SpaceKind::circle;
  auto arc = [&](double u, double v) {
    double d = std::fabs(u - v);
    return circle ? std::min(d, 1.0 - d) : d;
  };
  std::vector<double> kept_base;
  std::vector<std::pair<double, int>> window;  // (distance, kept index)
  for (int i = 0; i < static_cast<int>(orbits.size()); ++i) {
    double b = orbits[static_cast<size_t>(i)].base_point().coord;
    window.clear();
    for (int k = 0; k < static_cast<int>(out.kept.size()); ++k) {
      double d = arc(kept_base[static_cast<size_t>(k)], b);
      if (d < params.eps) window.emplace_back(d, k);
    }
    std::sort(window.begin(), window.end());
    out.pair_tests += static_cast<int64_t>(window.size());
    bool all_sep = true;
    for (const auto& [d, k] : window) {
      auto r = orbit_pair_test(
          orbits[static_cast<size_t>(i)],
          orbits[static_cast<size_t>(out.kept[static_cast<size_t>(k)])], params,
          /*canonical=*/false, probes);
      out.nodes += r.nodes;
      if (!r.separated) {
        all_sep = false;
        break;
      }
      out.max_witness_len = std::max(out.max_witness_len, r.witness.length());
    }
    if (all_sep) {
      out.kept.push_back(i);
      kept_base.push_back(b);
    }
  }
  return out;
}

double lsq_slope(const std::vector<std::pair<double, double>>& pts) {
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double den = n * sxx - sx * sx;
  if (den == 0) return 0.0;
  return (n * sxy - sx * sy) / den;
}

}  // namespace

SeparationResult separated(const GeneratingSet& gens, Point p, Point q,
                           const SeparationParams& params) {
  auto x = PseudoOrbit::exact_orbit(gens, p);
  auto y = PseudoOrbit::exact_orbit(gens, q);
  return orbit_pair_test(x, y, params, /*canonical=*/true, /*probes=*/false);
}

SeparationResult strongly_separated(const PseudoOrbit& x, const PseudoOrbit& y,
                                    const SeparationParams& params) {
  bool adv = x.provenance() == PseudoOrbit::Provenance::adversarial ||
             y.provenance() == PseudoOrbit::Provenance::adversarial;
  return orbit_pair_test(x, y, params, /*canonical=*/!adv, /*probes=*/adv);
}

std::vector<Point> max_separated_set(const GeneratingSet& gens,
                                     const std::vector<Point>& candidates,
                                     const SeparationParams& params) {
  for (size_t i = 0; i + 1 < candidates.size(); ++i)
    if (candidates[i].coord > candidates[i + 1].coord)
      throw std::invalid_argument(
          "max_separated_set: candidates must be sorted by coordinate");
  std::vector<PseudoOrbit> orbits;
  orbits.reserve(candidates.size());
  for (Point p : candidates) orbits.push_back(PseudoOrbit::exact_orbit(gens, p));
  auto out = greedy_separated(orbits, params, /*probes=*/false);
  std::vector<Point> kept;
  kept.reserve(out.kept.size());
  for (int i : out.kept) kept.push_back(candidates[static_cast<size_t>(i)]);
  return kept;
}

TableRow count_points(const GeneratingSet& gens, const SeparationParams& params,
                      int grid) {
  if (grid < 1) throw std::invalid_argument("count_points: grid must be >= 1");
  auto net = gens.space().epsilon_net(1.0 / grid);
  std::vector<PseudoOrbit> orbits;
  orbits.reserve(net.size());
  for (Point p : net) orbits.push_back(PseudoOrbit::exact_orbit(gens, p));
  auto out = greedy_separated(orbits, params, /*probes=*/false);
  TableRow row;
  row.n = params.n;
  row.eps = params.eps;
  row.alpha = 0.0;
  row.count = static_cast<int64_t>(out.kept.size());
  double spacing = 1.0 / grid;
  row.resolution_flag =
      spacing > params.eps * std::pow(gens.max_lipschitz(), -params.n) *
                    (1.0 + 1e-12);
  row.max_witness_len = out.max_witness_len;
  row.pair_tests = out.pair_tests;
  row.nodes = out.nodes;
  return row;
}

std::vector<int> max_strongly_separated(const OrbitPool& pool,
                                        const SeparationParams& params) {
  bool probes = false;
  for (const auto& x : pool.orbits)
    if (x.provenance() == PseudoOrbit::Provenance::adversarial) probes = true;
  return greedy_separated(pool.orbits, params, probes).kept;
}

TableRow count_pseudo_orbits(const OrbitPool& pool,
                             const SeparationParams& params) {
  bool probes = false;
  for (const auto& x : pool.orbits)
    if (x.provenance() == PseudoOrbit::Provenance::adversarial) probes = true;
  auto out = greedy_separated(pool.orbits, params, probes);
  TableRow row;
  row.n = params.n;
  row.eps = params.eps;
  row.alpha = pool.alpha;
  row.count = static_cast<int64_t>(out.kept.size());
  row.max_witness_len = out.max_witness_len;
  row.pair_tests = out.pair_tests;
  row.nodes = out.nodes;
  return row;
}

EntropyEstimate entropy_estimate(const EntropyTable& table) {
  // group rows by eps, preserving first-seen order, then sort eps descending
  std::vector<double> eps_values;
  for (const auto& r : table.rows)
    if (std::find(eps_values.begin(), eps_values.end(), r.eps) ==
        eps_values.end())
      eps_values.push_back(r.eps);
  std::sort(eps_values.begin(), eps_values.end(), std::greater<>());

  EntropyEstimate est;
  for (double eps : eps_values) {
    std::vector<const TableRow*> rows;
    for (const auto& r : table.rows)
      if (r.eps == eps) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(),
              [](const TableRow* a, const TableRow* b) { return a->n < b->n; });
    if (rows.size() < 4)
      throw std::runtime_error(
          "entropy_estimate: need at least 4 word lengths per eps");
    // longest run of consecutive-in-n unflagged rows
    size_t best_lo = 0, best_len = 0;
    size_t i = 0;
    while (i < rows.size()) {
      if (rows[i]->resolution_flag) {
        ++i;
        continue;
      }
      size_t j = i;
      while (j + 1 < rows.size() && !rows[j + 1]->resolution_flag &&
             rows[j + 1]->n == rows[j]->n + 1)
        ++j;
      if (j - i + 1 > best_len) {
        best_len = j - i + 1;
        best_lo = i;
      }
      i = j + 1;
    }
    SlopeEstimate se;
    se.eps = eps;
    size_t lo = best_lo, hi = best_lo + best_len;  // [lo, hi)
    if (best_len < 4) {
      se.resolution_limited = true;
      lo = 0;
      hi = rows.size();
    }
    se.win_lo = rows[lo]->n;
    se.win_hi = rows[hi - 1]->n;
    std::vector<std::pair<double, double>> pts;
    for (size_t k = lo; k < hi; ++k)
      pts.emplace_back(static_cast<double>(rows[k]->n),
                       std::log(static_cast<double>(std::max<int64_t>(
                           rows[k]->count, 1))));
    se.slope_lsq = lsq_slope(pts);
    size_t half = lo + (hi - lo) / 2;
    double tm = 0.0;
    for (size_t k = half; k < hi; ++k) {
      if (rows[k]->n == 0) continue;
      tm = std::max(tm, std::log(static_cast<double>(std::max<int64_t>(
                            rows[k]->count, 1))) /
                            rows[k]->n);
    }
    se.slope_tailmax = tm;
    est.per_eps.push_back(se);
  }
  const auto& smallest = est.per_eps.back();
  est.h = smallest.slope_lsq;
  est.estimator_spread = std::fabs(smallest.slope_lsq - smallest.slope_tailmax);
  if (est.per_eps.size() >= 2) {
    est.eps_spread = std::fabs(est.per_eps[est.per_eps.size() - 2].slope_lsq -
                               smallest.slope_lsq);
  }
  est.stable = est.estimator_spread <= 0.1 && est.eps_spread <= 0.05;
  return est;
}

Schedule Schedule::theorem1(double L, double eps) {
  Schedule s;
  s.kind = Kind::theorem1;
  s.L = L;
  s.eps = eps;
  return s;
}

Schedule Schedule::remark(double L, double eps) {
  Schedule s;
  s.kind = Kind::remark;
  s.L = L;
  s.eps = eps;
  return s;
}

Schedule Schedule::constant(double alpha) {
  Schedule s;
  s.kind = Kind::constant;
  s.value = alpha;
  return s;
}

Schedule Schedule::list(std::vector<double> values, int n_lo) {
  Schedule s;
  s.kind = Kind::list;
  s.values = std::move(values);
  s.n_lo = n_lo;
  return s;
}

namespace {
double geom_sum(double L, int terms) {  // 1 + L + ... + L^{terms-1}
  if (terms <= 0) return 1.0;
  if (L == 1.0) return static_cast<double>(terms);
  return (std::pow(L, terms) - 1.0) / (L - 1.0);
}
}  // namespace

double Schedule::beta(int n) const {
  switch (kind) {
    case Kind::theorem1:
      return eps / geom_sum(L, n);
    case Kind::remark:
      return eps / geom_sum(L, n + 1);
    case Kind::constant:
      return value;
    case Kind::list: {
      int idx = n - n_lo;
      if (idx < 0 || idx >= static_cast<int>(values.size()))
        throw std::runtime_error("schedule list does not cover n=" +
                                 std::to_string(n));
      return values[static_cast<size_t>(idx)];
    }
  }
  return 0.0;
}

void Schedule::validate(int lo, int hi) const {
  if (kind == Kind::list) {
    if (static_cast<int>(values.size()) < hi - lo + 1)
      throw std::runtime_error("schedule list shorter than the n range");
    for (double v : values)
      if (!(v > 0)) throw std::runtime_error("schedule values must be positive");
    for (size_t i = 0; i + 1 < values.size(); ++i)
      if (values[i + 1] > values[i] + 1e-15)
        throw std::runtime_error("schedule values must be nonincreasing");
  } else if (kind == Kind::constant) {
    if (!(value > 0)) throw std::runtime_error("constant schedule alpha must be > 0");
  } else {
    if (!(eps > 0) || !(L >= 0))
      throw std::runtime_error("schedule needs eps > 0 and L >= 0");
  }
  (void)lo;
}

std::string Schedule::describe() const {
  switch (kind) {
    case Kind::theorem1:
      return "theorem1: beta_n = eps*(1+L+...+L^(n-1))^-1";
    case Kind::remark:
      return "remark: beta_n = eps*(1+L+...+L^n)^-1";
    case Kind::constant:
      return "const: beta_n = " + std::to_string(value);
    case Kind::list:
      return "list (" + std::to_string(values.size()) + " values)";
  }
  return "";
}

PseudoEntropyResult pseudo_entropy_estimate(
    const GeneratingSet& gens, const Schedule& schedule, int n_lo, int n_hi,
    const std::vector<double>& eps_grid, int grid, uint64_t seed, int threads,
    const PoolBuilder& builder) {
  if (n_lo > n_hi) throw std::invalid_argument("empty n range");
  schedule.validate(n_lo, n_hi);
  PoolBuilder build = builder;
  if (!build) {
    build = [&gens, grid, seed](int n, double eps, double alpha) {
      (void)n;
      (void)eps;
      return OrbitPool::seeded_grid(gens, grid, alpha, seed);
    };
  }
  struct Job {
    int n;
    double eps;
  };
  std::vector<Job> jobs;
  for (double eps : eps_grid)
    for (int n = n_lo; n <= n_hi; ++n) jobs.push_back({n, eps});
  std::vector<TableRow> pseudo(jobs.size()), orbit(jobs.size());
  parallel_for(static_cast<int64_t>(jobs.size()), threads, [&](int64_t k) {
    const Job& j = jobs[static_cast<size_t>(k)];
    double alpha = schedule.beta(j.n);
    SeparationParams params{j.n, j.eps};
    OrbitPool pool = build(j.n, j.eps, alpha);
    pseudo[static_cast<size_t>(k)] = count_pseudo_orbits(pool, params);
    orbit[static_cast<size_t>(k)] = count_points(gens, params, grid);
    // same resolution regime for both tables, so the slope windows align
    pseudo[static_cast<size_t>(k)].resolution_flag =
        orbit[static_cast<size_t>(k)].resolution_flag;
  });
  PseudoEntropyResult res;
  res.pseudo_rows.rows = std::move(pseudo);
  res.orbit_rows.rows = std::move(orbit);
  res.pseudo_estimate = entropy_estimate(res.pseudo_rows);
  res.orbit_estimate = entropy_estimate(res.orbit_rows);
  return res;
}

}  // namespace pge
