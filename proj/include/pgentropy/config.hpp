#pragma once

#include <stdexcept>
#include <string>

#include "pgentropy/gallery.hpp"

#include "json.hpp"

namespace pge {

// Configuration rejection with the offending field named.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_path(field) {}
  std::string field_path;
};

// Parses and validates a system config:
//   { "space": "circle" | "interval",
//     "generators": [ { "id": k, "kind": "identity"|"affine"|"moebius"|
//                       "sine"|"sine_inverse"|"plateau"|"plateau_inverse",
//                       "pieces": [ { "domain": [a, b], "params": [...] } ],
//                       "lipschitz": L, "inverse": j }, ... ],
//     "metadata": { ... } }
// Structural checks (identity presence, symmetry, domain sanity) come first;
// then sampled checks: Lipschitz bounds, monotonicity, inverse consistency to
// 1e-12, and that rules map into the space.
GallerySystem parse_system_config(const nlohmann::json& config);

// Accepts "gallery:<name>" or a JSON config file path.
GallerySystem load_system(const std::string& spec);

// Sampled validation of an already-built generating set; throws ConfigError.
void validate_generating_set(const GeneratingSet& gens,
                             const std::string& context = "generators");

nlohmann::json system_to_json(const GallerySystem& sys);

}  // namespace pge
