#pragma once

#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace atla {

// Dispatches fn(i) for i in [0, n). Iterations must be independent and must
// write only to disjoint slots; callers that can throw must catch inside fn.
// The serial path is the reference the parallel path is tested against.
template <typename Fn>
void for_each_index(int n, bool parallel, Fn&& fn) {
#ifdef _OPENMP
  if (parallel && n > 1) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
#else
  (void)parallel;
#endif
  for (int i = 0; i < n; ++i) fn(i);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace atla
