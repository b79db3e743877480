#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace fracvar {

inline std::atomic<unsigned>& thread_count_slot() {
  static std::atomic<unsigned> n{0};  // 0 = hardware concurrency
  return n;
}

inline void set_default_threads(unsigned n) { thread_count_slot().store(n); }

inline unsigned default_threads() {
  unsigned n = thread_count_slot().load();
  if (n == 0) n = std::thread::hardware_concurrency();
  return n == 0 ? 1u : n;
}

/// Runs fn(i) for i in [0, count). Each index must write only its own slots,
/// so the result is identical for any worker count.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                         unsigned threads = 0) {
  if (threads == 0) threads = default_threads();
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  if (threads > count) threads = static_cast<unsigned>(count);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load() && err) std::rethrow_exception(err);
}

}  // namespace fracvar
