#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bmm {

// Process-wide worker count used by parallel_for. Results never depend on it:
// every index owns its own substream and output slot.
void set_worker_count(unsigned workers);
unsigned worker_count();

namespace detail {
bool& inside_parallel_region();
}

/// Runs body(i) for i in [0, count). Work is split into contiguous chunks, one
/// per worker. Nested calls run serially on the calling worker.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1 || detail::inside_parallel_region()) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    threads.emplace_back([&, begin, end] {
      detail::inside_parallel_region() = true;
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  threads.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace bmm
