#pragma once

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmlwave::detail {

/// Applies the PMLWAVE_THREADS cap (if set and valid) to the OpenMP runtime.
/// Values below 1 are treated as 1; parsing failures leave the default.
/// No-op in serial builds. Safe to call repeatedly.
inline void apply_thread_cap() {
#ifdef _OPENMP
  static bool done = false;
  if (done) return;
  done = true;
  const char* env = std::getenv("PMLWAVE_THREADS");
  if (!env) return;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0') return;
  if (v < 1) v = 1;
  if (v > omp_get_max_threads()) v = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(v));
#endif
}

} // namespace pmlwave::detail
