#include "mde/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mde {

void run_indexed_serial(std::size_t n, const std::function<void(std::size_t)>& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

#ifdef _OPENMP

void run_indexed(std::size_t n, const std::function<void(std::size_t)>& fn) {
    std::atomic<bool> failed{false};
    std::exception_ptr first;
    std::mutex mu;
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!first) first = std::current_exception();
            failed.store(true, std::memory_order_relaxed);
        }
    }
    if (first) std::rethrow_exception(first);
}

int max_threads() { return omp_get_max_threads(); }
bool openmp_enabled() { return true; }

#else

void run_indexed(std::size_t n, const std::function<void(std::size_t)>& fn) {
    run_indexed_serial(n, fn);
}

int max_threads() { return 1; }
bool openmp_enabled() { return false; }

#endif

}  // namespace mde
