#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace fhp {

// Runs fn(i) for i in [0, count). Work units must be independent and write
// only to their own slots; results are then identical for any thread count.
inline void parallel_for(std::ptrdiff_t count, int threads,
                         const std::function<void(std::ptrdiff_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::ptrdiff_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const int workers = static_cast<int>(std::min<std::ptrdiff_t>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::ptrdiff_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace fhp
