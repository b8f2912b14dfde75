#include "pgentropy/bundles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pge {

double HolonomyPresentation::max_length() const {
  return *std::max_element(lengths.begin(), lengths.end());
}

double HolonomyPresentation::min_length() const {
  return *std::min_element(lengths.begin(), lengths.end());
}

void HolonomyPresentation::validate() const {
  if (lengths.empty())
    throw std::invalid_argument("presentation needs at least one length");
  for (double l : lengths)
    if (!(l > 0)) throw std::invalid_argument("lengths must be positive");
}

BoundsReport entropy_bounds(const HolonomyPresentation& pres, double h_holonomy) {
  pres.validate();
  if (h_holonomy < 0) throw std::invalid_argument("entropy must be >= 0");
  BoundsReport rep;
  rep.h_holonomy = h_holonomy;
  rep.lower = h_holonomy / pres.max_length();
  rep.upper = h_holonomy / pres.min_length();
  rep.ps_lower = rep.lower;
  rep.ps_upper = rep.upper;
  return rep;
}

RescaleReport rescale_generators(const HolonomyPresentation& pres, int m) {
  pres.validate();
  double a = pres.max_length();
  double b = pres.min_length();
  if (static_cast<double>(m) < a)
    throw std::invalid_argument(
        "rescale_generators: m must be >= the maximum length");
  RescaleReport rep;
  rep.m = m;
  for (double l : pres.lengths) {
    auto mk = static_cast<long long>(std::floor(static_cast<double>(m) / l));
    rep.exponents.push_back(mk);
    rep.new_lengths.push_back(static_cast<double>(mk) * l);
    rep.new_lengths.push_back(static_cast<double>(mk + 1) * l);
  }
  rep.a_prime = *std::max_element(rep.new_lengths.begin(), rep.new_lengths.end());
  rep.b_prime = *std::min_element(rep.new_lengths.begin(), rep.new_lengths.end());
  rep.ratio = rep.a_prime / rep.b_prime;
  rep.paper_bound_lo = static_cast<double>(m) / (static_cast<double>(m) + 1.0 + b);
  rep.paper_bound_hi = (static_cast<double>(m) + 1.0 + b) / static_cast<double>(m);
  rep.paper_bound_ok =
      rep.ratio >= rep.paper_bound_lo - 1e-12 && rep.ratio <= rep.paper_bound_hi + 1e-12;
  rep.arithmetic_bound = (static_cast<double>(m) + a) / (static_cast<double>(m) - a);
  rep.arithmetic_bound_ok = rep.ratio <= rep.arithmetic_bound + 1e-12;
  return rep;
}

SuspensionReport suspension_entropy(const HolonomyPresentation& pres,
                                    const GeneratingSet& fiber_action,
                                    const SuspensionParams& params) {
  pres.validate();
  SuspensionReport rep;
  for (double eps : params.eps_grid)
    for (int n = params.n_lo; n <= params.n_hi; ++n)
      rep.fiber_rows.rows.push_back(
          count_points(fiber_action, SeparationParams{n, eps}, params.grid));
  rep.fiber_estimate = entropy_estimate(rep.fiber_rows);
  rep.bounds = entropy_bounds(pres, std::max(0.0, rep.fiber_estimate.h));
  return rep;
}

}  // namespace pge
