#include "pgentropy/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "pgentropy/parallel.hpp"

namespace pge {

namespace {

Piece affine_piece(double lo, double hi, double c0, double c1) {
  Piece p;
  p.lo = lo;
  p.hi = hi;
  p.rule.kind = RuleKind::affine;
  p.rule.c = {c0, c1, 0.0, 0.0};
  return p;
}

// Adds the affine arc piece [lo, hi) -> c0 + c1*t, splitting at the wrap
// point when the domain arc crosses 1.
void add_arc_piece(std::vector<Piece>& out, double lo, double hi, double c0,
                   double c1) {
  if (lo >= 1.0) {
    lo -= 1.0;
    hi -= 1.0;
    c0 += c1;
  }
  if (hi <= 1.0 + 1e-15) {
    if (hi > 1.0) hi = 1.0;
    if (hi > lo) out.push_back(affine_piece(lo, hi, c0, c1));
    return;
  }
  out.push_back(affine_piece(lo, 1.0, c0, c1));
  out.push_back(affine_piece(0.0, hi - 1.0, c0 + c1, c1));
}

void sort_pieces(LocalMap& m) {
  std::sort(m.pieces.begin(), m.pieces.end(),
            [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
}

// Piecewise-affine circle homeomorphism with source p and sink q: slope
// 1+delta outside the two contraction subarcs of length w adjacent to the
// sink; the average-slope-1 constraint on each complementary arc fixes the
// contraction slopes. Built from value anchors so p and q are fixed exactly.
LocalMap plateau_map(int id, const std::string& label, double p, double q,
                     double delta, double w) {
  double l1 = q - p;
  l1 -= std::floor(l1);
  double l2 = 1.0 - l1;
  if (l1 <= w || l2 <= w)
    throw std::invalid_argument("plateau_map: contraction arcs overlap");
  // shape anchors in arc coordinates from p: (u, value)
  const double us[5] = {0.0, l1 - w, l1, l1 + w, 1.0};
  const double vs[5] = {0.0, (l1 - w) * (1.0 + delta), l1,
                        1.0 - (l2 - w) * (1.0 + delta), 1.0};
  if (!(vs[1] < vs[2] && vs[2] < vs[3]))
    throw std::invalid_argument("plateau_map: delta too large for these arcs");
  LocalMap m;
  m.id = id;
  m.label = label;
  double lip = 0.0;
  for (int k = 0; k < 4; ++k) {
    double slope = (vs[k + 1] - vs[k]) / (us[k + 1] - us[k]);
    lip = std::max(lip, slope);
    // t in [p+us[k], p+us[k+1]) maps to p + vs[k] + slope*(t - p - us[k])
    double c1 = slope;
    double c0 = p + vs[k] - slope * (p + us[k]);
    add_arc_piece(m.pieces, p + us[k], p + us[k + 1], c0, c1);
  }
  m.lipschitz = lip;
  sort_pieces(m);
  return m;
}

// Inverts a piecewise-affine circle map with positive slopes.
LocalMap invert_piecewise_affine(const LocalMap& src, int id,
                                 const std::string& label) {
  LocalMap m;
  m.id = id;
  m.label = label;
  double lip = 0.0;
  for (const auto& piece : src.pieces) {
    double c0 = piece.rule.c[0], c1 = piece.rule.c[1];
    if (!(c1 > 0))
      throw std::invalid_argument("invert_piecewise_affine: slope must be > 0");
    double ylo = c0 + c1 * piece.lo;
    double yhi = c0 + c1 * piece.hi;
    double k = std::floor(ylo + 1e-15);
    // t = (y + k - c0)/c1 on the reduced arc [ylo-k, yhi-k)
    add_arc_piece(m.pieces, ylo - k, yhi - k, (k - c0) / c1, 1.0 / c1);
    lip = std::max(lip, 1.0 / c1);
  }
  m.lipschitz = lip;
  sort_pieces(m);
  return m;
}

LocalMap identity_map(SpaceKind kind) {
  LocalMap e;
  e.id = 0;
  e.label = "e";
  Piece p;
  p.lo = 0.0;
  p.hi = 1.0;
  p.rule.kind = RuleKind::identity;
  e.pieces.push_back(p);
  e.lipschitz = 1.0;
  e.inverse_id = 0;
  (void)kind;
  return e;
}

GallerySystem build_identity() {
  CompactSpace space(SpaceKind::circle);
  std::vector<LocalMap> maps{identity_map(space.kind())};
  return GallerySystem{"identity", GeneratingSet(space, std::move(maps)), {}, {}};
}

GallerySystem build_rotation(double theta) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("rotation angle must be in (0,1)");
  CompactSpace space(SpaceKind::circle);
  LocalMap r;
  r.id = 1;
  r.label = "r";
  r.pieces = {affine_piece(0.0, 1.0 - theta, theta, 1.0),
              affine_piece(1.0 - theta, 1.0, theta - 1.0, 1.0)};
  r.lipschitz = 1.0;
  r.inverse_id = 2;
  LocalMap rinv;
  rinv.id = 2;
  rinv.label = "rinv";
  rinv.pieces = {affine_piece(0.0, theta, 1.0 - theta, 1.0),
                 affine_piece(theta, 1.0, -theta, 1.0)};
  rinv.lipschitz = 1.0;
  rinv.inverse_id = 1;
  std::vector<LocalMap> maps{identity_map(space.kind()), r, rinv};
  return GallerySystem{"rotation:" + std::to_string(theta),
                       GeneratingSet(space, std::move(maps)), {}, {}};
}

GallerySystem build_dyadic() {
  CompactSpace space(SpaceKind::circle);
  LocalMap b0;
  b0.id = 1;
  b0.label = "b0";
  b0.pieces = {affine_piece(0.0, 0.5, 0.0, 2.0)};
  b0.lipschitz = 2.0;
  b0.inverse_id = 3;
  LocalMap b1;
  b1.id = 2;
  b1.label = "b1";
  b1.pieces = {affine_piece(0.5, 1.0, -1.0, 2.0)};
  b1.lipschitz = 2.0;
  b1.inverse_id = 4;
  // inverse branches split at 1/2 so the per-piece Lipschitz bound is honest
  // for pairs straddling the wrap point
  LocalMap b0i;
  b0i.id = 3;
  b0i.label = "b0inv";
  b0i.pieces = {affine_piece(0.0, 0.5, 0.0, 0.5),
                affine_piece(0.5, 1.0, 0.0, 0.5)};
  b0i.lipschitz = 0.5;
  b0i.inverse_id = 1;
  LocalMap b1i;
  b1i.id = 4;
  b1i.label = "b1inv";
  b1i.pieces = {affine_piece(0.0, 0.5, 0.5, 0.5),
                affine_piece(0.5, 1.0, 0.5, 0.5)};
  b1i.lipschitz = 0.5;
  b1i.inverse_id = 2;
  std::vector<LocalMap> maps{identity_map(space.kind()), b0, b1, b0i, b1i};
  return GallerySystem{"dyadic", GeneratingSet(space, std::move(maps)), {}, {}};
}

// U_i arcs: the complement of the (alpha0-inflated) contraction zone
// [q-w-alpha0, q+w+alpha0], split at the wrap point.
std::vector<std::pair<double, double>> expansion_arcs(double q, double w,
                                                      double alpha0) {
  double lo = q + w + alpha0;  // start of the expansion region
  double hi = q - w - alpha0 + 1.0;
  lo -= std::floor(lo);
  double len = hi - (q + w + alpha0);
  std::vector<std::pair<double, double>> arcs;
  double a = lo, b = lo + len;
  if (b <= 1.0 + 1e-15) {
    arcs.emplace_back(a, std::min(b, 1.0));
  } else {
    arcs.emplace_back(a, 1.0);
    arcs.emplace_back(0.0, b - 1.0);
  }
  return arcs;
}

constexpr double kSec6Delta = 0.15;   // claimed margin (plateaus run at 1.2)
constexpr double kSec6Alpha0 = 0.12;  // perturbation ceiling
constexpr double kSec6W = 0.1;        // contraction subarc length per side
constexpr double kSec6Design = 0.2;   // design slope margin

GallerySystem build_section6() {
  CompactSpace space(SpaceKind::circle);
  const double p0 = 0.0, q0 = 0.5, p1 = 0.45, q1 = 0.95;
  LocalMap f0 = plateau_map(1, "f0", p0, q0, kSec6Design, kSec6W);
  f0.inverse_id = 2;
  LocalMap f0i = invert_piecewise_affine(f0, 2, "f0inv");
  f0i.inverse_id = 1;
  LocalMap f1 = plateau_map(3, "f1", p1, q1, kSec6Design, kSec6W);
  f1.inverse_id = 4;
  LocalMap f1i = invert_piecewise_affine(f1, 4, "f1inv");
  f1i.inverse_id = 3;
  std::vector<LocalMap> maps{identity_map(space.kind()), f0, f0i, f1, f1i};
  GeneratingSet gens(space, std::move(maps));

  MorseSmalePair pair;
  pair.f0_id = 1;
  pair.f1_id = 3;
  pair.p0 = p0;
  pair.q0 = q0;
  pair.p1 = p1;
  pair.q1 = q1;
  pair.delta = kSec6Delta;
  pair.alpha0 = kSec6Alpha0;
  auto tmpl = std::make_shared<AdversarialTemplate>();
  tmpl->f0_id = pair.f0_id;
  tmpl->f1_id = pair.f1_id;
  tmpl->alpha0 = pair.alpha0;
  tmpl->delta = pair.delta;
  tmpl->u0_arcs = expansion_arcs(q0, kSec6W, kSec6Alpha0);
  tmpl->u1_arcs = expansion_arcs(q1, kSec6W, kSec6Alpha0);
  pair.tmpl = tmpl;

  GallerySystem sys{"section6", std::move(gens), pair, {}};
  auto report = check_section6_hypotheses(sys.gens, *sys.pair);
  if (!report.ok) {
    std::string which;
    for (const auto& c : report.checks)
      if (!c.pass) which += (which.empty() ? "" : ", ") + c.name;
    throw std::runtime_error("section6 hypothesis check failed: " + which);
  }
  sys.hypothesis = std::move(report);
  return sys;
}

double signed_arc(double from, double to) {
  double d = to - from;
  d -= std::floor(d + 0.5);
  return d;
}

}  // namespace

LocalMap make_plateau_map(int id, const std::string& label, double p, double q,
                          double delta, double w) {
  return plateau_map(id, label, p, q, delta, w);
}

LocalMap make_plateau_inverse(int id, const std::string& label, double p,
                              double q, double delta, double w) {
  LocalMap fwd = plateau_map(id, label, p, q, delta, w);
  return invert_piecewise_affine(fwd, id, label);
}

GallerySystem build_gallery(const std::string& name) {
  if (name == "identity") return build_identity();
  if (name == "dyadic") return build_dyadic();
  if (name == "section6") return build_section6();
  if (name.rfind("rotation", 0) == 0) {
    double theta = 0.6180339887498949;  // golden ratio conjugate
    auto pos = name.find(':');
    if (pos != std::string::npos) theta = std::stod(name.substr(pos + 1));
    return build_rotation(theta);
  }
  throw std::invalid_argument("unknown gallery system: " + name);
}

HypothesisReport check_section6_hypotheses(const GeneratingSet& gens,
                                           const MorseSmalePair& pair,
                                           int grid) {
  HypothesisReport rep;
  rep.alpha0 = pair.alpha0;
  const CompactSpace& space = gens.space();
  auto add = [&](const std::string& name, bool pass, double margin,
                 std::string detail = "") {
    rep.checks.push_back({name, pass, margin, std::move(detail)});
  };

  const int ids[2] = {pair.f0_id, pair.f1_id};
  const double fixed_expect[2][2] = {{pair.p0, pair.q0}, {pair.p1, pair.q1}};
  double located[2][2] = {{0, 0}, {0, 0}};  // [map][source=0 / sink=1]

  std::vector<std::vector<double>> slopes(2, std::vector<double>(grid));
  for (int mi = 0; mi < 2; ++mi) {
    const LocalMap& f = gens.map(ids[mi]);
    // grid displacement and finite-difference slopes (independent of pieces)
    std::vector<double> disp(grid);
    std::vector<double> val(grid);
    for (int k = 0; k < grid; ++k) {
      double t = static_cast<double>(k) / grid;
      auto v = gens.apply_letter(f.id, t);
      if (!v) {
        add("full_domain_" + f.label, false, 0.0, "undefined at grid point");
        rep.ok = false;
        return rep;
      }
      val[static_cast<size_t>(k)] = *v;
      disp[static_cast<size_t>(k)] = signed_arc(t, *v);
    }
    for (int k = 0; k < grid; ++k) {
      double dv = signed_arc(val[static_cast<size_t>(k)],
                             val[static_cast<size_t>((k + 1) % grid)]);
      slopes[mi][static_cast<size_t>(k)] = dv * grid;
    }
    // fixed points: sign changes of the displacement around the circle
    int sources = 0, sinks = 0;
    for (int k = 0; k < grid; ++k) {
      double a = disp[static_cast<size_t>(k)];
      double b = disp[static_cast<size_t>((k + 1) % grid)];
      if (a == 0.0) {
        double prev = disp[static_cast<size_t>((k + grid - 1) % grid)];
        if (prev < 0 && b > 0) located[mi][0] = static_cast<double>(k) / grid, sources++;
        if (prev > 0 && b < 0) located[mi][1] = static_cast<double>(k) / grid, sinks++;
      } else if (a < 0 && b >= 0 && b != 0.0) {
        located[mi][0] = static_cast<double>(k) / grid;
        sources++;
      } else if (a > 0 && b <= 0 && b != 0.0) {
        located[mi][1] = static_cast<double>(k) / grid;
        sinks++;
      }
    }
    bool fp_ok = sources == 1 && sinks == 1;
    add("fixed_points_" + f.label, fp_ok,
        static_cast<double>(sources + sinks) - 2.0,
        "sources=" + std::to_string(sources) + " sinks=" + std::to_string(sinks));
    double loc_err =
        std::max(space.distance(Point{located[mi][0]}, Point{fixed_expect[mi][0]}),
                 space.distance(Point{located[mi][1]}, Point{fixed_expect[mi][1]}));
    add("fixed_point_location_" + f.label, loc_err < 2.0 / grid, loc_err);
  }

  // disjointness of the fixed-point sets
  double mind = 1.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      mind = std::min(mind, space.distance(Point{fixed_expect[0][a]},
                                           Point{fixed_expect[1][b]}));
  add("fixed_points_disjoint", mind > 0.01, mind);

  // cover: min over the circle of the best neighborhood slope, window +-alpha0
  int win = static_cast<int>(std::ceil(pair.alpha0 * grid));
  double worst = 1e300;
  const AdversarialTemplate& t = *pair.tmpl;
  bool arcs_consistent = true;
  for (int k = 0; k < grid; ++k) {
    double best = -1e300;
    for (int mi = 0; mi < 2; ++mi) {
      double mn = 1e300;
      for (int d = -win; d <= win; ++d)
        mn = std::min(mn, slopes[mi][static_cast<size_t>((k + d % grid + grid) % grid)]);
      best = std::max(best, mn);
      double tcoord = static_cast<double>(k) / grid;
      bool in_u = mi == 0 ? t.in_u0(tcoord) : t.in_u1(tcoord);
      if (in_u && mn <= 1.0 + pair.delta) arcs_consistent = false;
    }
    worst = std::min(worst, best);
    double tcoord = static_cast<double>(k) / grid;
    if (!t.in_u0(tcoord) && !t.in_u1(tcoord)) arcs_consistent = false;
  }
  rep.measured_delta = worst - 1.0;
  add("cover_margin", rep.measured_delta > pair.delta,
      rep.measured_delta - pair.delta,
      "measured delta=" + std::to_string(rep.measured_delta));
  add("u_arcs_consistent", arcs_consistent, 0.0);

  rep.ok = true;
  for (const auto& c : rep.checks) rep.ok = rep.ok && c.pass;
  return rep;
}

int n_eps_alpha(double eps, double alpha, double delta) {
  if (!(alpha > 0) || !(alpha <= eps) || !(delta > 0))
    throw std::invalid_argument("n_eps_alpha: need 0 < alpha <= eps, delta > 0");
  return static_cast<int>(std::floor(std::log(eps / alpha) /
                                     std::log(1.0 + delta)));
}

PseudoOrbit adversarial_pseudo_orbit(const GallerySystem& sys, Point x,
                                     const Word& g, double alpha) {
  if (!sys.pair) throw std::invalid_argument("system has no Morse-Smale pair");
  return PseudoOrbit::adversarial_orbit(sys.gens, sys.pair->tmpl, x, g, alpha);
}

BranchGrowthReport check_branch_growth(const GallerySystem& sys,
                                       const PseudoOrbit& adversarial,
                                       int depth, std::optional<double> eps) {
  if (!sys.pair) throw std::invalid_argument("system has no Morse-Smale pair");
  const MorseSmalePair& pair = *sys.pair;
  const GeneratingSet& gens = sys.gens;
  BranchGrowthReport rep;
  rep.depth = depth;
  double alpha = adversarial.alpha();
  if (alpha == 0.0) {
    rep.vacuous = true;
    return rep;
  }
  int threshold = -1;
  if (eps) threshold = n_eps_alpha(*eps, alpha, pair.delta);

  auto adv_cursor = adversarial.root();
  auto exact = PseudoOrbit::exact_orbit(gens, adversarial.base_point());
  auto exact_cursor = exact.root();
  const auto& base = adversarial.branch_base().letters;
  for (auto it = base.rbegin(); it != base.rend(); ++it) {
    if (!adversarial.step(adv_cursor, *it) || !exact.step(exact_cursor, *it))
      throw std::runtime_error("branch base not evaluable");
  }
  const AdversarialTemplate& t = *adversarial.adversarial();
  rep.min_margin = depth > 0 ? 1e300 : 0.0;
  for (int j = 1; j <= depth; ++j) {
    int id = t.chosen_letter(adv_cursor.value);
    if (!adversarial.step(adv_cursor, id) || !exact.step(exact_cursor, id))
      throw std::runtime_error("branch step not evaluable");
    double dev = gens.space().distance(Point{adv_cursor.value},
                                       Point{exact_cursor.value});
    // The roster pins the first deviation to exactly alpha; the displayed
    // growth alpha*(1+delta)^j is the induction's closed form from j = 2 on.
    double bound = (j == 1) ? alpha : alpha * std::pow(1.0 + pair.delta, j);
    if (threshold >= 0 && j > threshold) bound = std::max(bound, *eps);
    bool pass = dev >= bound - 1e-12;
    rep.min_margin = std::min(rep.min_margin, dev - bound);
    if (!pass) {
      rep.ok = false;
      if (rep.violations.size() < 16)
        rep.violations.push_back({j, dev, bound, false});
    }
    if (j == depth) rep.final_deviation = dev;
  }
  return rep;
}

namespace {

Word branch_word_from_bits(const MorseSmalePair& pair, int n, uint32_t bits) {
  Word g;
  g.letters.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    g.letters[static_cast<size_t>(i)] =
        ((bits >> i) & 1u) ? pair.f1_id : pair.f0_id;
  return g;
}

double lsq_slope_pts(const std::vector<std::pair<double, double>>& pts) {
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double den = n * sxx - sx * sx;
  return den == 0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

GapReport gap_experiment(const GallerySystem& sys, int n, double eps,
                         double alpha, int grid, int threads, bool exhaustive) {
  if (!sys.pair) throw std::invalid_argument("system has no Morse-Smale pair");
  const MorseSmalePair& pair = *sys.pair;
  if (!(alpha < pair.alpha0) || !(eps > alpha))
    throw std::invalid_argument("gap_experiment: need alpha < alpha0 and eps > alpha");
  const GeneratingSet& gens = sys.gens;

  GapReport rep;
  rep.n = n;
  rep.eps = eps;
  rep.alpha = alpha;
  rep.n_eps_alpha = n_eps_alpha(eps, alpha, pair.delta);
  rep.separation_length = n + rep.n_eps_alpha + 1;

  auto net = gens.space().epsilon_net(1.0 / grid);
  auto A = max_separated_set(gens, net, SeparationParams{n, eps});
  rep.base_count = static_cast<int64_t>(A.size());

  const int64_t branches = int64_t{1} << n;
  std::vector<PseudoOrbit> family;
  family.reserve(A.size() * static_cast<size_t>(branches));
  for (const Point& x : A)
    for (int64_t b = 0; b < branches; ++b)
      family.push_back(adversarial_pseudo_orbit(
          sys, x, branch_word_from_bits(pair, n, static_cast<uint32_t>(b)),
          alpha));
  rep.pseudo_count = static_cast<int64_t>(family.size());
  rep.identity_ok = rep.pseudo_count == branches * rep.base_count;

  // Base witnesses are branch independent (roster values at words of length
  // <= n are exact), so one word per base pair covers all branch choices.
  const auto nbase = static_cast<int64_t>(A.size());
  std::vector<Word> base_witness(static_cast<size_t>(nbase * nbase));
  std::vector<char> base_ok(static_cast<size_t>(nbase * nbase), 0);
  {
    std::vector<std::pair<int32_t, int32_t>> bp;
    for (int32_t i = 0; i < nbase; ++i)
      for (int32_t j = i + 1; j < nbase; ++j) bp.emplace_back(i, j);
    parallel_for(static_cast<int64_t>(bp.size()), threads, [&](int64_t k) {
      auto [i, j] = bp[static_cast<size_t>(k)];
      auto w = separated(gens, A[static_cast<size_t>(i)],
                         A[static_cast<size_t>(j)], SeparationParams{n, eps});
      size_t at = static_cast<size_t>(i) * static_cast<size_t>(nbase) +
                  static_cast<size_t>(j);
      base_ok[at] = w.separated ? 1 : 0;
      if (w.separated) base_witness[at] = w.witness;
    });
  }

  // family pair checks: (base i, branch a) vs (base j, branch b)
  struct Task {
    int32_t i, a, j, b;
  };
  std::vector<Task> tasks;
  const auto nb = static_cast<int32_t>(branches);
  for (int32_t i = 0; i < nbase; ++i)
    for (int32_t a = 0; a < nb; ++a)
      for (int32_t b = a + 1; b < nb; ++b) tasks.push_back({i, a, i, b});
  if (exhaustive) {
    for (int32_t i = 0; i < nbase; ++i)
      for (int32_t j = i + 1; j < nbase; ++j)
        for (int32_t a = 0; a < nb; ++a)
          for (int32_t b = 0; b < nb; ++b) tasks.push_back({i, a, j, b});
  } else {
    for (int32_t i = 0; i < nbase; ++i)
      for (int32_t j = i + 1; j < nbase; ++j)
        for (int32_t a : {0, nb - 1})
          for (int32_t b : {0, nb - 1}) tasks.push_back({i, a, j, b});
  }

  SeparationParams deep{rep.separation_length, eps};
  std::vector<double> margins(tasks.size(), 0.0);
  parallel_for(static_cast<int64_t>(tasks.size()), threads, [&](int64_t idx) {
    const Task& t = tasks[static_cast<size_t>(idx)];
    const PseudoOrbit& x = family[static_cast<size_t>(t.i) * static_cast<size_t>(nb) +
                                  static_cast<size_t>(t.a)];
    const PseudoOrbit& y = family[static_cast<size_t>(t.j) * static_cast<size_t>(nb) +
                                  static_cast<size_t>(t.b)];
    double dist = -1.0;
    Word witness;
    bool have_witness = false;
    if (t.i != t.j) {
      size_t at = static_cast<size_t>(t.i) * static_cast<size_t>(nbase) +
                  static_cast<size_t>(t.j);
      if (base_ok[at]) {
        witness = base_witness[at];
        have_witness = true;
      }
    } else {
      auto r = strongly_separated(x, y, deep);
      if (r.separated) {
        witness = r.witness;
        have_witness = true;
      }
    }
    if (have_witness) {
      auto vx = x.value(witness);
      auto vy = y.value(witness);
      if (vx && vy) dist = gens.space().distance(Point{*vx}, Point{*vy});
    }
    margins[static_cast<size_t>(idx)] = dist - eps;
  });
  rep.separation_ok = true;
  rep.min_pair_margin = tasks.empty() ? 0.0 : 1e300;
  for (size_t idx = 0; idx < tasks.size(); ++idx) {
    double m = margins[idx];
    if (!(m >= -1e-12)) {
      rep.separation_ok = false;
      if (rep.failure.empty()) {
        const Task& t = tasks[idx];
        rep.failure = "base " + std::to_string(t.i) + " branch " +
                      std::to_string(t.a) + " vs base " + std::to_string(t.j) +
                      " branch " + std::to_string(t.b) + " not separated";
      }
    }
    rep.min_pair_margin = std::min(rep.min_pair_margin, m);
  }
  rep.inequality_ok =
      rep.separation_ok && rep.pseudo_count >= branches * rep.base_count;
  return rep;
}

GapSeries gap_series(const GallerySystem& sys, int n_lo, int n_hi, double eps,
                     double alpha, int grid, int threads, int exhaustive_limit) {
  GapSeries series;
  std::vector<std::pair<double, double>> orbit_pts, pseudo_pts;
  for (int n = n_lo; n <= n_hi; ++n) {
    series.reports.push_back(gap_experiment(sys, n, eps, alpha, grid, threads,
                                            n <= exhaustive_limit));
    const auto& r = series.reports.back();
    orbit_pts.emplace_back(n, std::log(static_cast<double>(r.base_count)));
    pseudo_pts.emplace_back(n, std::log(static_cast<double>(r.pseudo_count)));
  }
  series.slope_orbit = lsq_slope_pts(orbit_pts);
  series.slope_pseudo = lsq_slope_pts(pseudo_pts);
  series.slope_gap = series.slope_pseudo - series.slope_orbit;
  return series;
}

PoolBuilder section6_pool_builder(const GallerySystem& sys, int grid) {
  if (!sys.pair) throw std::invalid_argument("system has no Morse-Smale pair");
  const GallerySystem* s = &sys;
  return [s, grid](int n, double eps, double alpha) {
    OrbitPool pool;
    pool.gens = &s->gens;
    pool.alpha = alpha;
    int K = n_eps_alpha(eps, alpha, s->pair->delta);
    int n_base = n - K - 1;
    auto net = s->gens.space().epsilon_net(1.0 / grid);
    if (n_base >= 1) {
      auto A = max_separated_set(s->gens, net, SeparationParams{n_base, eps});
      for (const Point& x : A)
        for (int64_t b = 0; b < (int64_t{1} << n_base); ++b)
          pool.orbits.push_back(adversarial_pseudo_orbit(
              *s, x,
              branch_word_from_bits(*s->pair, n_base, static_cast<uint32_t>(b)),
              alpha));
      pool.sort_canonical();
    } else {
      for (const Point& p : net)
        pool.orbits.push_back(PseudoOrbit::exact_orbit(s->gens, p));
    }
    return pool;
  };
}

PseudoEntropyResult section6_const_alpha_estimate(const GallerySystem& sys,
                                                  int n_lo, int n_hi,
                                                  double eps, double alpha,
                                                  int grid, int threads) {
  auto series = gap_series(sys, n_lo, n_hi, eps, alpha, grid, threads);
  PseudoEntropyResult res;
  for (const auto& r : series.reports) {
    TableRow pr;
    pr.n = r.n;
    pr.eps = eps;
    pr.alpha = alpha;
    pr.count = r.pseudo_count;
    pr.max_witness_len = r.separation_length;
    res.pseudo_rows.rows.push_back(pr);
    TableRow orow;
    orow.n = r.n;
    orow.eps = eps;
    orow.alpha = 0.0;
    orow.count = r.base_count;
    res.orbit_rows.rows.push_back(orow);
  }
  res.pseudo_estimate = entropy_estimate(res.pseudo_rows);
  res.orbit_estimate = entropy_estimate(res.orbit_rows);
  return res;
}

}  // namespace pge
