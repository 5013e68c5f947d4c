#ifndef RLAB_PARALLEL_HPP
#define RLAB_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rlab {

/// Worker count for data-parallel loops. Defaults to RLAB_THREADS when set,
/// otherwise 1.
int thread_count();
void set_thread_count(int n);

/// Runs fn(i) for i in [0, count) on up to thread_count() workers. Each
/// index is processed exactly once and results are expected to be written
/// to per-index slots, so the outcome does not depend on the worker count.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

} // namespace rlab

#endif
