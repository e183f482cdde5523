#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace cpaudit {

// Runs fn(i) for i in [0, count) across up to `threads` workers. Results land
// in index order, so output is independent of scheduling. Each task must seed
// its own RNG from the index; nothing here synchronizes shared state.
template <typename Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn fn)
    -> std::vector<decltype(fn(std::size_t{0}))> {
  using Result = decltype(fn(std::size_t{0}));
  std::vector<Result> results(count);
  if (count == 0) return results;
  if (threads == 0) threads = 1;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        results[i] = fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace cpaudit
