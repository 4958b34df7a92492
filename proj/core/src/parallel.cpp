#include "chaoscope/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef __linux__
#include <sched.h>
#endif

namespace chaoscope {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CHAOSCOPE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
#ifdef __linux__
  // hardware_concurrency ignores the affinity mask, which matters in
  // cgroup-limited environments
  cpu_set_t mask;
  if (sched_getaffinity(0, sizeof(mask), &mask) == 0) {
    const int count = CPU_COUNT(&mask);
    if (count > 0) return static_cast<unsigned>(count);
  }
#endif
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace chaoscope
