#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace monoboot {

// Runs fn(i) for i in [0, count). Work items must write results by index;
// the output is then independent of the thread count and schedule.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn &&fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(std::size_t(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += nt) fn(i);
    });
  }
  for (auto &th : pool) th.join();
}

}  // namespace monoboot
