#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace pge {

// Deterministic parallel map: fn(i) runs once for every i in [0, n), statically
// chunked over `threads` workers. Results must go to caller-owned slots indexed
// by i; any reduction happens sequentially afterwards, so outputs never depend
// on the worker count.
template <class Fn>
void parallel_for(int64_t n, int threads, Fn&& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  int t = threads;
  if (static_cast<int64_t>(t) > n) t = static_cast<int>(n);
  std::vector<std::thread> workers;
  workers.reserve(static_cast<size_t>(t));
  for (int w = 0; w < t; ++w) {
    int64_t lo = n * w / t;
    int64_t hi = n * (w + 1) / t;
    workers.emplace_back([lo, hi, &fn] {
      for (int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : workers) th.join();
}

}  // namespace pge
