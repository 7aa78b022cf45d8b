#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace gwsrank {

// Runs fn(i) for i in [0, n) across up to `threads` workers. Each index owns
// its own output slot, so results are identical for any worker count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t worker_count = std::min<std::size_t>(threads, n);
  std::vector<std::thread> workers;
  workers.reserve(worker_count);
  for (std::size_t w = 0; w < worker_count; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += worker_count) fn(i);
    });
  }
  for (auto& worker : workers) worker.join();
}

}  // namespace gwsrank
