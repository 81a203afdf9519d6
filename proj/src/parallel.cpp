#include "bmm/parallel.hpp"

#include <atomic>

namespace bmm {

namespace {
std::atomic<unsigned> g_workers{1};
}

void set_worker_count(unsigned workers) { g_workers = std::max(1u, workers); }
unsigned worker_count() { return g_workers; }

bool& detail::inside_parallel_region() {
  thread_local bool inside = false;
  return inside;
}

}  // namespace bmm
