#pragma once

#include <atomic>
#include <complex>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace weylzeta {

// Process-wide worker count for sampling loops and contour sweeps.
// 0 = use hardware_concurrency().
int& thread_count();

// Runs fn(i) for i in [0, n). Results must be written into preallocated
// slots so the reduction order stays fixed regardless of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  int want = thread_count();
  unsigned hw = want > 0 ? static_cast<unsigned>(want)
                         : std::max(1u, std::thread::hardware_concurrency());
  if (hw <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  unsigned k = static_cast<unsigned>(std::min<std::size_t>(hw, n));
  pool.reserve(k - 1);
  for (unsigned t = 0; t + 1 < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

// Pairwise summation: deterministic and cancellation-friendly, matching the
// fixed reduction order promised by the reports.
template <typename T>
T pairwise_sum(const std::vector<T>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return T{};
  if (hi - lo == 1) return v[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v, 0, v.size());
}

}  // namespace weylzeta
