#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace cocyclelab {

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count). Each item writes only its own output slot,
// so results are identical for any worker count; reductions happen after the
// join, in index order.
template <typename Fn>
void parallel_for_index(std::size_t count, int workers, Fn&& fn) {
  workers = resolve_workers(workers);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count || failed.load(std::memory_order_relaxed)) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int nthreads = static_cast<int>(std::min<std::size_t>(count, workers));
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

} // namespace cocyclelab
