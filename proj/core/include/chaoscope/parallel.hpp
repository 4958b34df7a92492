#ifndef CHAOSCOPE_PARALLEL_HPP
#define CHAOSCOPE_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace chaoscope {

/// Number of worker threads: explicit request, else CHAOSCOPE_THREADS,
/// else hardware concurrency.
unsigned resolve_threads(unsigned requested = 0);

/// Strided parallel map. Each index owns its output slot, so callers get
/// bit-identical results for any thread count as long as reductions happen
/// serially afterwards.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads = 0) {
  const unsigned t = resolve_threads(threads);
  if (t <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += t) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace chaoscope

#endif
