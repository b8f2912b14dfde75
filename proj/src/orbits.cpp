#include "pgentropy/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "pgentropy/rng.hpp"

namespace pge {

namespace {

bool in_arcs(const std::vector<std::pair<double, double>>& arcs, double t) {
  for (const auto& [a, b] : arcs)
    if (t >= a && t < b) return true;
  return false;
}

}  // namespace

bool AdversarialTemplate::in_u0(double t) const { return in_arcs(u0_arcs, t); }
bool AdversarialTemplate::in_u1(double t) const { return in_arcs(u1_arcs, t); }

PseudoOrbit PseudoOrbit::exact_orbit(const GeneratingSet& gens, Point p) {
  auto im = std::make_shared<Impl>();
  im->gens = &gens;
  im->prov = Provenance::exact;
  im->root.value = p.coord;
  return PseudoOrbit(std::move(im));
}

PseudoOrbit PseudoOrbit::perturbed_orbit(const GeneratingSet& gens, Point p,
                                         double alpha, uint64_t seed) {
  if (alpha < 0) throw std::invalid_argument("perturbed_orbit: alpha < 0");
  auto im = std::make_shared<Impl>();
  im->gens = &gens;
  im->prov = Provenance::perturbed;
  im->alpha = alpha;
  im->seed = seed;
  im->root.value = p.coord;
  im->root.key = stream_root(seed);
  return PseudoOrbit(std::move(im));
}

PseudoOrbit PseudoOrbit::adversarial_orbit(
    const GeneratingSet& gens, std::shared_ptr<const AdversarialTemplate> t,
    Point p, Word branch_base, double alpha) {
  if (!t) throw std::invalid_argument("adversarial_orbit: missing template");
  if (alpha < 0 || alpha > t->alpha0)
    throw std::invalid_argument("adversarial_orbit: alpha must be in [0, alpha0]");
  for (int id : branch_base.letters)
    if (id != t->f0_id && id != t->f1_id)
      throw std::invalid_argument(
          "adversarial_orbit: branch base must use the positive generators");
  auto im = std::make_shared<Impl>();
  im->gens = &gens;
  im->prov = Provenance::adversarial;
  im->alpha = alpha;
  im->tmpl = std::move(t);
  im->branch = std::move(branch_base);
  im->root.value = p.coord;
  im->root.adv_state = im->branch.empty() ? 1 : 0;
  return PseudoOrbit(std::move(im));
}

PseudoOrbit PseudoOrbit::shifted(const Word& g0) const {
  auto im = std::make_shared<Impl>();
  im->gens = impl_->gens;
  im->prov = Provenance::shifted;
  im->alpha = impl_->alpha;
  im->seed = impl_->seed;
  im->tmpl = impl_->tmpl;
  im->parent = impl_;
  im->shift_word = g0;
  Cursor c = impl_->root;
  for (auto it = g0.letters.rbegin(); it != g0.letters.rend(); ++it)
    if (!step_impl(*impl_, c, *it))
      throw std::invalid_argument("shift: g0 is not in the orbit's domain");
  im->root = c;
  return PseudoOrbit(std::move(im));
}

PseudoOrbit PseudoOrbit::corrupted_at(int depth, int letter, double delta) const {
  auto im = std::make_shared<Impl>(*impl_);
  im->corrupt_depth = depth;
  im->corrupt_letter = letter;
  im->corrupt_delta = delta;
  return PseudoOrbit(std::move(im));
}

bool PseudoOrbit::step_impl(const Impl& im, Cursor& c, int letter) {
  const GeneratingSet& g = *im.gens;
  if (im.prov == Provenance::shifted) {
    if (!step_impl(*im.parent, c, letter)) return false;
  } else {
    const LocalMap& m = g.map(letter);
    const Piece* piece = m.piece_at(c.value);
    if (!piece) return false;
    double raw = piece->rule.apply(c.value);
    double v = g.space().reduce(raw).coord;
    switch (im.prov) {
      case Provenance::exact:
        c.value = v;
        break;
      case Provenance::perturbed: {
        uint64_t k = stream_step(c.key, letter);
        double noisy = raw + symmetric_from_key(k, im.alpha);
        c.value = g.space().reduce(noisy).coord;
        c.key = k;
        break;
      }
      case Provenance::adversarial: {
        if (letter == g.identity_id()) {
          // e-padding is transparent: value and roster state are unchanged
          break;
        }
        const AdversarialTemplate& t = *im.tmpl;
        switch (c.adv_state) {
          case 0: {  // on the spine of suffixes of the branch base
            int expect =
                im.branch.letters[im.branch.letters.size() - 1 -
                                  static_cast<size_t>(c.adv_pos)];
            if (letter == expect) {
              c.adv_pos++;
              if (c.adv_pos == im.branch.length()) c.adv_state = 1;
            } else {
              c.adv_state = 3;
            }
            c.value = v;
            break;
          }
          case 1: {  // at the branch base g
            if (letter == t.chosen_letter(c.value)) {
              c.adv_state = 2;
              c.adv_pos = 1;  // branch depth
              c.value = g.space().reduce(raw + im.alpha).coord;
            } else {
              c.adv_state = 3;
              c.value = v;
            }
            break;
          }
          case 2: {  // on the distinguished branch
            if (letter == t.chosen_letter(c.value)) {
              c.adv_pos++;
              c.value = g.space().reduce(raw + im.alpha).coord;
            } else {
              c.adv_state = 3;
              c.value = v;
            }
            break;
          }
          default:  // off the branch: exact continuation
            c.value = v;
            break;
        }
        break;
      }
      default:
        c.value = v;
        break;
    }
  }
  c.depth++;
  c.last_letter = letter;
  if (im.corrupt_depth >= 0 && c.depth == im.corrupt_depth &&
      letter == im.corrupt_letter) {
    c.value = g.space().reduce(c.value + im.corrupt_delta).coord;
  }
  return true;
}

bool PseudoOrbit::step(Cursor& c, int letter) const {
  return step_impl(*impl_, c, letter);
}

std::optional<double> PseudoOrbit::value(const Word& w) const {
  Cursor c = root();
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    if (!step(c, *it)) return std::nullopt;
  return c.value;
}

std::vector<std::pair<Word, double>> PseudoOrbit::materialize(
    int depth, size_t max_nodes) const {
  std::vector<std::pair<Word, double>> out;
  std::deque<std::pair<Word, Cursor>> queue;
  queue.emplace_back(Word{}, root());
  const GeneratingSet& g = gens();
  while (!queue.empty() && out.size() < max_nodes) {
    auto [w, c] = queue.front();
    queue.pop_front();
    out.emplace_back(w, c.value);
    if (w.length() >= depth) continue;
    for (int id : g.letter_ids()) {
      if (c.last_letter >= 0 && g.inverse(c.last_letter) == id) continue;
      Cursor child = c;
      if (!step(child, id)) continue;
      Word cw = Word::concat(Word::single(id), w);
      queue.emplace_back(std::move(cw), child);
    }
  }
  return out;
}

nlohmann::json PseudoOrbit::to_json(int materialize_depth) const {
  const char* prov = "exact";
  switch (provenance()) {
    case Provenance::exact: prov = "exact"; break;
    case Provenance::perturbed: prov = "perturbed"; break;
    case Provenance::adversarial: prov = "adversarial"; break;
    case Provenance::shifted: prov = "shifted"; break;
  }
  nlohmann::json j{{"alpha", alpha()},
                   {"base", base_point().coord},
                   {"provenance", prov},
                   {"seed", seed()},
                   {"stream", kPerturbationStream}};
  if (provenance() == Provenance::adversarial)
    j["branch_base"] = branch_base().letters;
  if (materialize_depth > 0) {
    auto nodes = materialize(materialize_depth);
    auto arr = nlohmann::json::array();
    for (const auto& [w, v] : nodes) arr.push_back({{"word", w.letters}, {"value", v}});
    j["materialized"] = std::move(arr);
  }
  return j;
}

namespace {

void verify_rec(const PseudoOrbit& x, const PseudoOrbit::Cursor& c, Word& path,
                int depth, VerifyReport& rep, size_t max_violations) {
  if (depth == 0) return;
  const GeneratingSet& g = x.gens();
  for (int id = 0; id < g.size(); ++id) {
    bool in_domain = g.map(id).defined_at(c.value);
    PseudoOrbit::Cursor child = c;
    bool stepped = x.step(child, id);
    rep.nodes++;
    path.letters.insert(path.letters.begin(), id);
    if (stepped != in_domain) {
      rep.ok = false;
      if (rep.violations.size() < max_violations)
        rep.violations.push_back({path, 0.0, true});
    } else if (stepped) {
      auto exact = g.apply_letter(id, c.value);
      double dev = g.space().distance(Point{*exact}, Point{child.value});
      rep.max_deviation = std::max(rep.max_deviation, dev);
      if (dev > x.alpha() + 1e-12) {
        rep.ok = false;
        if (rep.violations.size() < max_violations)
          rep.violations.push_back({path, dev, false});
      }
      verify_rec(x, child, path, depth - 1, rep, max_violations);
    }
    path.letters.erase(path.letters.begin());
  }
}

}  // namespace

VerifyReport verify_pseudo_orbit(const PseudoOrbit& x, int depth,
                                 size_t max_violations) {
  VerifyReport rep;
  Word path;
  auto c = x.root();
  verify_rec(x, c, path, depth, rep, max_violations);
  return rep;
}

OrbitPool OrbitPool::seeded_grid(const GeneratingSet& gens, int grid,
                                 double alpha, uint64_t seed,
                                 bool include_exact, bool include_perturbed) {
  OrbitPool pool;
  pool.gens = &gens;
  pool.alpha = alpha;
  auto net = gens.space().epsilon_net(1.0 / grid);
  for (size_t i = 0; i < net.size(); ++i) {
    if (include_exact) pool.orbits.push_back(PseudoOrbit::exact_orbit(gens, net[i]));
    if (include_perturbed)
      pool.orbits.push_back(PseudoOrbit::perturbed_orbit(
          gens, net[i], alpha, splitmix64(seed ^ static_cast<uint64_t>(i))));
  }
  pool.sort_canonical();
  return pool;
}

void OrbitPool::sort_canonical() {
  std::stable_sort(orbits.begin(), orbits.end(),
                   [](const PseudoOrbit& a, const PseudoOrbit& b) {
                     if (a.base_point().coord != b.base_point().coord)
                       return a.base_point().coord < b.base_point().coord;
                     if (a.provenance() != b.provenance())
                       return static_cast<int>(a.provenance()) <
                              static_cast<int>(b.provenance());
                     return a.seed() < b.seed();
                   });
}

VerifyReport OrbitPool::verify(int depth) const {
  VerifyReport rep;
  for (const auto& x : orbits) {
    auto r = verify_pseudo_orbit(x, depth);
    rep.nodes += r.nodes;
    rep.max_deviation = std::max(rep.max_deviation, r.max_deviation);
    if (!r.ok) {
      rep.ok = false;
      for (auto& v : r.violations)
        if (rep.violations.size() < 16) rep.violations.push_back(v);
    }
  }
  return rep;
}

}  // namespace pge
