#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace tangle {

/// Static-partition parallel for. `fn(begin, end)` is invoked on disjoint
/// chunks; callers write results to disjoint slots, which keeps every output
/// bit-identical for any thread count.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  threads = std::max(1u, threads);
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(threads, n));
  if (workers == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t b = std::min<std::size_t>(n, w * chunk);
    const std::size_t e = std::min<std::size_t>(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, b, e);
  }
  for (auto& t : pool) t.join();
}

}  // namespace tangle
