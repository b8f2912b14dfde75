#pragma once

#include <vector>

#include "pgentropy/orbits.hpp"

namespace pge {

// Truncation control for the d0 series: the smallest l with
// 2^{-l} < eps / (2 diam X).
struct TruncationDepth {
  int l_eps = 0;
  double eps = 0.0;

  static TruncationDepth for_eps(const CompactSpace& space, double eps);
};

// A truncated series value: the true quantity lies in [lower, lower + tail],
// tail = 2^{-K} * diam X.
struct MetricValue {
  double lower = 0.0;
  double tail = 0.0;
  int truncation = 0;
};

// d0 truncated at K: sum_{k=0}^{K} 2^{-k} max{ d(x(g), y(g)) } over reduced
// words of length <= k lying in both domains (e is always common, so no level
// is empty).
MetricValue d0(const PseudoOrbit& x, const PseudoOrbit& y, int K);

// Pairwise d0 matrix over a pool plus its shortest-path closure: the
// pool-restricted upper bound for d1 (chains through pool members only).
class PoolMetrics {
 public:
  PoolMetrics(const OrbitPool& pool, int K, int threads = 1);

  int size() const { return n_; }
  int truncation() const { return K_; }
  double tail() const { return tail_; }
  const MetricValue& d0_at(int i, int j) const {
    return d0_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)];
  }
  // Shortest-path values over edge weights d0.lower resp. d0.lower + tail.
  MetricValue d1_upper(int i, int j) const;

 private:
  int n_ = 0;
  int K_ = 0;
  double tail_ = 0.0;
  std::vector<MetricValue> d0_;
  std::vector<double> closure_lower_;
  std::vector<double> closure_upper_;
};

// Convenience form of the d1 upper bound for two pool members.
MetricValue d1_upper(const OrbitPool& pool, int i, int j, int K);

struct ShiftLipschitzReport {
  double lhs = 0.0;  // d0(sigma_g x, sigma_g y).lower
  double rhs = 0.0;  // 2^n (d0(x,y).lower + tail) + slack
  int n = 0;
  bool ok = false;
};

// Checks the shift estimate d0(sigma_g x, sigma_g y) <= 2^n d0(x, y) in its
// truncation-aware form, with 1e-9 slack.
ShiftLipschitzReport shift_lipschitz_check(const PseudoOrbit& x,
                                           const PseudoOrbit& y, const Word& g0,
                                           int K);

}  // namespace pge
