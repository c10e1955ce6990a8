#include "qvort/parallel.hpp"

#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qvort {

namespace {
std::atomic<int> g_thread_cap{0};

int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int env_cap() {
  static const int cap = [] {
    if (const char* env = std::getenv("QVORT_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && v > 0) return static_cast<int>(v);
    }
    return 0;
  }();
  return cap;
}
}  // namespace

void set_thread_cap(int cap) { g_thread_cap.store(cap > 0 ? cap : 0); }

int max_threads() {
  int t = hardware_threads();
  if (const int e = env_cap(); e > 0 && e < t) t = e;
  if (const int c = g_thread_cap.load(); c > 0 && c < t) t = c;
  return t < 1 ? 1 : t;
}

}  // namespace qvort
