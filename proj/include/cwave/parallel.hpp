#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cwave {

/// Thread cap for line sweeps: CW_THREADS if set and positive, otherwise the
/// OpenMP default. Always 1 without OpenMP.
inline int line_threads() {
#ifdef _OPENMP
  static const int n = [] {
    if (const char* env = std::getenv("CW_THREADS")) {
      try {
        const int v = std::stoi(env);
        if (v > 0) return v;
      } catch (...) {
      }
    }
    return omp_get_max_threads();
  }();
  return n;
#else
  return 1;
#endif
}

/// Runs body(begin, end) over [0, count) split into contiguous chunks, one per
/// thread. `body` must only write to slots owned by its chunk.
template <typename Body>
void parallel_lines(long count, Body&& body) {
#ifdef _OPENMP
  const int nt = static_cast<int>(std::min<long>(line_threads(), std::max(1L, count / 8)));
  if (nt > 1) {
#pragma omp parallel num_threads(nt)
    {
      const int t = omp_get_thread_num();
      const long chunk = (count + nt - 1) / nt;
      const long b = std::min(count, t * chunk);
      const long e = std::min(count, b + chunk);
      if (b < e) body(b, e);
    }
    return;
  }
#endif
  body(0L, count);
}

}  // namespace cwave
