#include "pgentropy/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "pgentropy/rng.hpp"

namespace pge {

namespace {

RuleKind rule_kind_from(const std::string& kind, const std::string& field) {
  if (kind == "identity") return RuleKind::identity;
  if (kind == "affine") return RuleKind::affine;
  if (kind == "moebius") return RuleKind::moebius;
  if (kind == "sine") return RuleKind::sine;
  if (kind == "sine_inverse") return RuleKind::sine_inverse;
  throw ConfigError(field, "unknown kind '" + kind + "'");
}

size_t params_expected(RuleKind k) {
  switch (k) {
    case RuleKind::identity: return 0;
    case RuleKind::affine: return 2;
    case RuleKind::moebius: return 4;
    case RuleKind::sine: return 3;
    case RuleKind::sine_inverse: return 3;
  }
  return 0;
}

double sample_coord(uint64_t& state, double lo, double hi) {
  state = splitmix64(state);
  return lo + (hi - lo) * unit_from_key(state);
}

}  // namespace

void validate_generating_set(const GeneratingSet& gens,
                             const std::string& context) {
  const CompactSpace& space = gens.space();
  uint64_t state = 0x5EEDED5EEDEDULL;
  for (const auto& m : gens.maps()) {
    std::string field = context + "[" + std::to_string(m.id) + "]";
    const LocalMap& inv = gens.map(m.inverse_id);
    for (size_t pi = 0; pi < m.pieces.size(); ++pi) {
      const Piece& p = m.pieces[pi];
      std::string pf = field + ".pieces[" + std::to_string(pi) + "]";
      if (!(p.lo < p.hi) || p.lo < 0.0 || p.hi > 1.0 + 1e-15)
        throw ConfigError(pf + ".domain", "domain must satisfy 0 <= a < b <= 1");
      double hi = std::min(p.hi, 1.0) - 1e-12;
      for (int s = 0; s < 512; ++s) {
        double t = sample_coord(state, p.lo, hi);
        double v = p.rule.apply(t);
        Point rv = space.reduce(v);
        if (space.kind() == SpaceKind::interval && (v < -1e-9 || v > 1.0 + 1e-9))
          throw ConfigError(pf, "rule leaves the interval at t=" + std::to_string(t));

        // orientation on a close pair, compared through the signed arc so a
        // lift-branch jump in the raw formula does not trip the check
        double step = 0.1 / std::max(1.0, m.lipschitz);
        double u = std::min(t + step * (0.1 + unit_from_key(state = splitmix64(state))), hi);
        if (u > t) {
          double vu = p.rule.apply(u);
          double fwd = space.kind() == SpaceKind::circle
                           ? (space.reduce(vu).coord - rv.coord) -
                                 std::floor((space.reduce(vu).coord - rv.coord) + 0.5)
                           : vu - v;
          if (fwd < 0)
            throw ConfigError(pf, "rule is not increasing on its piece");
        }

        // Lipschitz bound on an independent same-piece pair
        double w = sample_coord(state, p.lo, hi);
        double vw = p.rule.apply(w);
        double dpq = space.kind() == SpaceKind::circle
                         ? std::min(std::fabs(w - t), 1.0 - std::fabs(w - t))
                         : std::fabs(w - t);
        double dimg = space.distance(space.reduce(vw), rv);
        if (dimg > m.lipschitz * dpq + 1e-9)
          throw ConfigError(field + ".lipschitz",
                            "declared bound violated on sampled pair");

        auto back = inv.apply_raw(rv.coord);
        if (!back)
          throw ConfigError(field + ".inverse",
                            "image point not in the inverse's domain");
        if (space.distance(space.reduce(*back), space.reduce(t)) > 1e-12)
          throw ConfigError(field + ".inverse",
                            "g^-1(g(p)) != p beyond 1e-12 at t=" + std::to_string(t));
      }
    }
  }
}

GallerySystem parse_system_config(const nlohmann::json& config) {
  if (!config.is_object()) throw ConfigError("(root)", "config must be an object");
  if (!config.contains("space")) throw ConfigError("space", "missing");
  std::string space_name = config["space"].get<std::string>();
  SpaceKind kind;
  if (space_name == "circle")
    kind = SpaceKind::circle;
  else if (space_name == "interval")
    kind = SpaceKind::interval;
  else
    throw ConfigError("space", "must be \"circle\" or \"interval\"");
  CompactSpace space(kind);

  if (!config.contains("generators") || !config["generators"].is_array())
    throw ConfigError("generators", "missing or not an array");
  const auto& gen_list = config["generators"];
  std::vector<LocalMap> maps(gen_list.size());
  std::vector<bool> seen(gen_list.size(), false);
  for (size_t gi = 0; gi < gen_list.size(); ++gi) {
    const auto& gj = gen_list[gi];
    std::string field = "generators[" + std::to_string(gi) + "]";
    for (const char* key : {"id", "kind", "pieces", "lipschitz", "inverse"})
      if (!gj.contains(key)) throw ConfigError(field + "." + key, "missing");
    int id = gj["id"].get<int>();
    if (id < 0 || id >= static_cast<int>(gen_list.size()) || seen[static_cast<size_t>(id)])
      throw ConfigError(field + ".id", "ids must be distinct in 0..m-1");
    seen[static_cast<size_t>(id)] = true;
    LocalMap m;
    m.id = id;
    m.label = gj.value("label", "g" + std::to_string(id));
    m.lipschitz = gj["lipschitz"].get<double>();
    if (!(m.lipschitz >= 0))
      throw ConfigError(field + ".lipschitz", "must be >= 0");
    m.inverse_id = gj["inverse"].get<int>();
    std::string kindstr = gj["kind"].get<std::string>();
    const auto& pieces = gj["pieces"];
    if (!pieces.is_array() || pieces.empty())
      throw ConfigError(field + ".pieces", "must be a nonempty array");

    if (kindstr == "plateau" || kindstr == "plateau_inverse") {
      // params [p, q, delta, w]: the piecewise-affine Morse-Smale circle map
      const auto& pj = pieces[0];
      if (!pj.contains("params") || pj["params"].size() != 4)
        throw ConfigError(field + ".pieces[0].params",
                          "plateau needs params [p, q, delta, w]");
      double p = pj["params"][0].get<double>();
      double q = pj["params"][1].get<double>();
      double delta = pj["params"][2].get<double>();
      double w = pj["params"][3].get<double>();
      try {
        m = kindstr == "plateau"
                ? make_plateau_map(id, m.label, p, q, delta, w)
                : make_plateau_inverse(id, m.label, p, q, delta, w);
      } catch (const std::exception& e) {
        throw ConfigError(field + ".pieces[0].params", e.what());
      }
      m.inverse_id = gj["inverse"].get<int>();
    } else {
      RuleKind rk = rule_kind_from(kindstr, field + ".kind");
      for (size_t pi = 0; pi < pieces.size(); ++pi) {
        const auto& pj = pieces[pi];
        std::string pf = field + ".pieces[" + std::to_string(pi) + "]";
        if (!pj.contains("domain") || pj["domain"].size() != 2)
          throw ConfigError(pf + ".domain", "must be [a, b]");
        Piece piece;
        piece.lo = pj["domain"][0].get<double>();
        piece.hi = pj["domain"][1].get<double>();
        piece.rule.kind = rk;
        auto params = pj.value("params", nlohmann::json::array());
        if (params.size() != params_expected(rk))
          throw ConfigError(pf + ".params",
                            "expected " + std::to_string(params_expected(rk)) +
                                " parameters for kind '" + kindstr + "'");
        for (size_t k = 0; k < params.size(); ++k)
          piece.rule.c[k] = params[k].get<double>();
        if (rk == RuleKind::affine && !(piece.rule.c[1] > 0))
          throw ConfigError(pf + ".params", "affine slope must be > 0");
        if (rk == RuleKind::moebius) {
          double det = piece.rule.c[0] * piece.rule.c[3] -
                       piece.rule.c[1] * piece.rule.c[2];
          if (!(det > 0))
            throw ConfigError(pf + ".params", "moebius determinant must be > 0");
        }
        if ((rk == RuleKind::sine || rk == RuleKind::sine_inverse) &&
            !(std::fabs(piece.rule.c[1]) * 2.0 * std::numbers::pi < 1.0))
          throw ConfigError(pf + ".params",
                            "sine amplitude too large for a monotone map");
        m.pieces.push_back(piece);
      }
    }
    std::sort(m.pieces.begin(), m.pieces.end(),
              [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    for (size_t pi = 0; pi + 1 < m.pieces.size(); ++pi)
      if (m.pieces[pi].hi > m.pieces[pi + 1].lo + 1e-15)
        throw ConfigError(field + ".pieces", "pieces overlap");
    maps[static_cast<size_t>(id)] = m;
  }

  if (maps.empty() || !maps[0].is_identity())
    throw ConfigError("generators", "generator 0 must be the identity");
  GallerySystem sys{config.value("name", std::string("config")),
                    GeneratingSet(space, std::move(maps)),
                    {},
                    {}};
  validate_generating_set(sys.gens);
  return sys;
}

GallerySystem load_system(const std::string& spec) {
  if (spec.rfind("gallery:", 0) == 0) return build_gallery(spec.substr(8));
  std::ifstream in(spec);
  if (!in) throw ConfigError("config", "cannot open '" + spec + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_system_config(j);
}

nlohmann::json system_to_json(const GallerySystem& sys) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& m : sys.gens.maps()) {
    nlohmann::json pieces = nlohmann::json::array();
    for (const auto& p : m.pieces) {
      const char* kind = "identity";
      size_t np = 0;
      switch (p.rule.kind) {
        case RuleKind::identity: kind = "identity"; np = 0; break;
        case RuleKind::affine: kind = "affine"; np = 2; break;
        case RuleKind::moebius: kind = "moebius"; np = 4; break;
        case RuleKind::sine: kind = "sine"; np = 3; break;
        case RuleKind::sine_inverse: kind = "sine_inverse"; np = 3; break;
      }
      nlohmann::json params = nlohmann::json::array();
      for (size_t k = 0; k < np; ++k) params.push_back(p.rule.c[k]);
      pieces.push_back({{"domain", {p.lo, p.hi}},
                        {"kind", kind},
                        {"params", std::move(params)}});
    }
    gens.push_back({{"id", m.id},
                    {"label", m.label},
                    {"lipschitz", m.lipschitz},
                    {"inverse", m.inverse_id},
                    {"pieces", std::move(pieces)}});
  }
  return {{"name", sys.name},
          {"space", sys.gens.space().name()},
          {"L", sys.gens.max_lipschitz()},
          {"generators", std::move(gens)}};
}

}  // namespace pge
