#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgentropy/separation.hpp"

namespace pge {

// Holonomy data of a foliated bundle: generator labels with the lengths of
// their homotopy classes. Only the lengths enter the calculator.
struct HolonomyPresentation {
  std::vector<double> lengths;  // l_k > 0

  double max_length() const;  // a
  double min_length() const;  // b
  void validate() const;
};

struct BoundsReport {
  double h_holonomy = 0.0;
  double lower = 0.0;  // h_H / a
  double upper = 0.0;  // h_H / b
  // the pseudo-entropy sandwich coincides since h_ps(H, H_1) = h(H, H_1)
  double ps_lower = 0.0;
  double ps_upper = 0.0;
};

// The entropy sandwich (1/a) h(H,H_1) <= h(F) <= (1/b) h(H,H_1).
BoundsReport entropy_bounds(const HolonomyPresentation& pres, double h_holonomy);

struct RescaleReport {
  int m = 0;
  std::vector<long long> exponents;  // m_k = floor(m / l_k)
  std::vector<double> new_lengths;   // { m_k l_k, (m_k + 1) l_k }
  double a_prime = 0.0;
  double b_prime = 0.0;
  double ratio = 0.0;  // a'/b'
  // displayed bound m/(m+1+b) <= a'/b' <= (m+1+b)/m, b = min original length
  double paper_bound_lo = 0.0;
  double paper_bound_hi = 0.0;
  bool paper_bound_ok = false;
  // the natural arithmetic bound (m+a)/(m-a), a = max original length
  double arithmetic_bound = 0.0;
  bool arithmetic_bound_ok = false;
};

// Replaces H_1 by { z_k^{m_k}, z_k^{m_k+1} } with m_k = floor(m / l_k); the
// ratio a'/b' tends to 1 as m grows. Requires m >= max l_k.
RescaleReport rescale_generators(const HolonomyPresentation& pres, int m);

struct SuspensionParams {
  int n_lo = 1;
  int n_hi = 6;
  std::vector<double> eps_grid{0.1};
  int grid = 1024;
};

struct SuspensionReport {
  BoundsReport bounds;
  EntropyTable fiber_rows;
  EntropyEstimate fiber_estimate;
};

// Estimates the entropy of the attached global-holonomy fiber action with the
// separated-orbit machinery (full domains, so no domain bookkeeping matters)
// and converts it into the bundle sandwich.
SuspensionReport suspension_entropy(const HolonomyPresentation& pres,
                                    const GeneratingSet& fiber_action,
                                    const SuspensionParams& params);

}  // namespace pge
