#pragma once

#include <cstdlib>
#include <string>

#include <Eigen/Core>
#ifdef _OPENMP
#include <omp.h>
#endif

namespace bohm_squeeze {

/// Reads BOHM_SQUEEZE_THREADS (0 or unset = runtime default) and applies it
/// to OpenMP regions and Eigen's GEMM kernels. Returns the thread count used.
inline int configure_threads_from_env() {
  int requested = 0;
  if (const char* env = std::getenv("BOHM_SQUEEZE_THREADS")) {
    try {
      requested = std::stoi(env);
    } catch (...) {
      requested = 0;
    }
  }
#ifdef _OPENMP
  if (requested > 0) omp_set_num_threads(requested);
  const int used = requested > 0 ? requested : omp_get_max_threads();
#else
  const int used = 1;
#endif
  Eigen::setNbThreads(used);
  return used;
}

}  // namespace bohm_squeeze
