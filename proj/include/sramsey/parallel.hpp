#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sramsey {

/// Runs `body(i)` for every i in [0, n) on up to `workers` threads.
template <class Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
  const std::size_t threads = std::min<std::size_t>(std::max(workers, 1), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

/// Smallest i in [0, n) with `pred(i)`, or n. The answer does not depend on
/// the worker count: every index below the reported one is evaluated.
template <class Pred>
std::size_t parallel_find_first(std::size_t n, int workers, Pred&& pred) {
  std::atomic<std::size_t> best{n};
  parallel_for(n, workers, [&](std::size_t i) {
    if (i >= best.load()) return;
    if (pred(i)) {
      std::size_t cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
  });
  return best.load();
}

}  // namespace sramsey
