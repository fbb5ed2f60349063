#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hyperglass {

namespace detail {
inline unsigned& thread_setting() {
  static unsigned value = 0;
  return value;
}
}  // namespace detail

// Worker count: explicit setting, else HYPERGLASS_THREADS, else 1.
inline unsigned default_threads() {
  if (detail::thread_setting() > 0) return detail::thread_setting();
  if (const char* env = std::getenv("HYPERGLASS_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

inline void set_default_threads(unsigned n) { detail::thread_setting() = n; }

// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items must
// write only to their own slot; the first exception is rethrown after joining.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  parallel_for(count, default_threads(), std::forward<Fn>(fn));
}

}  // namespace hyperglass
