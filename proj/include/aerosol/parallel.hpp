#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace aerosol {

inline int default_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hc, 1u, 16u));
}

/// Runs f(i) for i in [begin, end) across `threads` workers in contiguous
/// blocks. With threads <= 1 runs inline.
template <class F>
void parallel_for(int begin, int end, int threads, F&& f) {
  int n = end - begin;
  if (n <= 0) return;
  threads = std::clamp(threads, 1, n);
  if (threads == 1) {
    for (int i = begin; i < end; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  int block = (n + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    int lo = begin + w * block;
    int hi = std::min(end, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([&f, lo, hi] {
      for (int i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace aerosol
