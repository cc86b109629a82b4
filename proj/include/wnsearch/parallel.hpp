#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace wnsearch::parallel {

constexpr bool openmp_enabled() {
#if defined(_OPENMP)
    return true;
#else
    return false;
#endif
}

inline int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// n <= 0 restores the OpenMP default.
inline void set_threads(int n) {
#if defined(_OPENMP)
    omp_set_num_threads(n > 0 ? n : omp_get_num_procs());
#else
    (void)n;
#endif
}

/// Runs fn(i) for i in [0, n) across the OpenMP team with dynamic
/// scheduling. The first exception thrown by any iteration is rethrown on
/// the calling thread after the loop finishes.
template <typename Fn>
void for_each_index(std::size_t n, Fn&& fn, int chunk = 1) {
    std::exception_ptr error;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, chunk)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(wnsearch_parallel_error)
            {
                if (!error) error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace wnsearch::parallel
