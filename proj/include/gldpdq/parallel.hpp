#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gldpdq {

//! Runs fn(i) for i in [0, count) on up to `workers` threads. Callers write
//! results into slot i, so the outcome does not depend on scheduling. The
//! first exception thrown by any task is rethrown after all threads join.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn)
{
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load())
        return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
        failed.store(true);
      }
    }
  };

  const auto n_threads = static_cast<std::size_t>(std::min<std::size_t>(workers, count));
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t)
      pool.emplace_back(worker);
  }
  if (error)
    std::rethrow_exception(error);
}

} // namespace gldpdq
