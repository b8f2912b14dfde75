#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pgentropy/bundles.hpp"
#include "pgentropy/config.hpp"
#include "pgentropy/verify.hpp"

namespace pge {

inline constexpr const char* kEngineVersion = "pgentropy 0.1.0";

struct RunOutput {
  nlohmann::json summary;
  std::string csv;
  std::string cache_key;
  bool cache_hit = false;
};

struct EntropyOptions {
  std::string system;  // "gallery:<name>" or a config path
  int n_min = 0;
  int n_max = 10;
  std::vector<double> eps_grid{0.0078125};
  int grid = 65536;
  uint64_t seed = 1;
  int threads = 1;
  std::string cache_dir;  // empty disables the cache
};

// Separated-point counting table + entropy estimate (the Eq. 5-7 pipeline).
RunOutput run_entropy(const EntropyOptions& opt);

struct PseudoEntropyOptions : EntropyOptions {
  std::string schedule = "theorem1";  // theorem1 | remark | const:<a> | list:<csv>
};

// Pseudo-orbit counting with a tolerance schedule, side by side with orbit
// counting (the Eq. 8-10 pipeline). Constant schedules on the section-6
// system count the verified adversarial families.
RunOutput run_pseudo_entropy(const PseudoEntropyOptions& opt);

struct BundlesOptions {
  std::vector<double> lengths;
  std::optional<double> entropy;  // user-supplied h(H, H_1)
  std::string fiber_system;       // optional attached fiber action
  std::vector<int> m_list;
  int n_max = 5;
  double eps = 0.1;
  int grid = 1024;
  std::string cache_dir;
};

RunOutput run_bundles(const BundlesOptions& opt);

struct VerifyOptions {
  std::string suite = "all";  // metrics | orbits | section6 | all
  uint64_t seed = 1;
  int threads = 1;
};

// Machine-readable pass/fail per invariant; `ok` false when any check failed.
RunOutput run_verify(const VerifyOptions& opt);

// Fixed table serialization: header n,eps,alpha,count,slope_tailmax,slope_lsq.
std::string table_csv(const EntropyTable& table, const EntropyEstimate& est);

Schedule parse_schedule(const std::string& spec, double L, double eps, int n_lo);

}  // namespace pge
