#include "geosurf/parallel.hpp"

namespace geosurf {

namespace {
std::atomic<unsigned> g_workers{0};
}

void set_worker_count(unsigned workers) { g_workers = workers; }

unsigned worker_count() {
  const unsigned w = g_workers;
  return w > 0 ? w : std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace geosurf
