#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef SSST_HAVE_OPENMP
#include <omp.h>
#endif

namespace ssst {

// Execution mode for grid kernels. Every loop writes result slot i from
// iteration i only, so Serial and Parallel produce identical bytes; Serial
// is the reference implementation the tests compare against.
enum class Exec { Serial, Parallel };

// Runs body(i) for i in [0, n). Exceptions are captured per index and the
// lowest-index one is rethrown after the loop, so error reporting does not
// depend on the thread schedule.
template <class F>
void for_each_index(std::size_t n, Exec mode, F&& body) {
    std::vector<std::exception_ptr> errors(n);

    auto guarded = [&](std::size_t i) {
        try {
            body(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

#ifdef SSST_HAVE_OPENMP
    if (mode == Exec::Parallel) {
        const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < nn; ++i) guarded(static_cast<std::size_t>(i));
    } else
#else
    (void)mode;
#endif
    {
        for (std::size_t i = 0; i < n; ++i) guarded(i);
    }

    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline int max_threads() {
#ifdef SSST_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef SSST_HAVE_OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace ssst
