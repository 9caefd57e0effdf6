#pragma once
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace relnet {

// Static block partition across workers; each index is processed by a fixed
// worker regardless of timing, so results are schedule-independent.
inline void parallel_for(std::size_t count, int workers,
                         const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::size_t w = std::min<std::size_t>(workers, count);
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    threads.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += w) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

}  // namespace relnet
