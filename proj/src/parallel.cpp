#include "rieszlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rieszlab {

static int thread_cap_from_env() {
  const char* v = std::getenv("RIESZLAB_THREADS");
  if (!v) return 0;
  try {
    int n = std::stoi(v);
    return n > 0 ? n : 0;
  } catch (...) {
    return 0;
  }
}

int effective_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  int cap = thread_cap_from_env();
  if (cap > 0) n = std::min(n, cap);
  return std::max(1, n);
}

void apply_thread_env() {
#ifdef _OPENMP
  int cap = thread_cap_from_env();
  if (cap > 0) omp_set_num_threads(cap);
#endif
}

}  // namespace rieszlab
