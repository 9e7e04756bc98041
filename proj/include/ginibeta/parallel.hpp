#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ginibeta {

// Number of worker threads used by parallel_for; GINIBETA_THREADS overrides
// the hardware count.
std::size_t worker_count();

// Runs fn(i) for i in [0, count) on up to worker_count() threads with a
// static contiguous split. fn must write only to slots owned by i. The first
// exception thrown by any worker is rethrown after all workers join.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr first;
  std::mutex guard;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t wkr = 0; wkr < workers; ++wkr) {
    const std::size_t lo = count * wkr / workers;
    const std::size_t hi = count * (wkr + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!first) first = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace ginibeta
