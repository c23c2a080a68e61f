#pragma once

#include <cstddef>
#include <functional>

namespace mde {

// Runs fn(i) for i in [0, n). Parallel over OpenMP when available; callers
// write into pre-sized slots indexed by i so downstream reductions read the
// slots in index order and stay bit-identical to the serial run. The first
// exception thrown by any fn wins and is rethrown on the calling thread.
void run_indexed(std::size_t n, const std::function<void(std::size_t)>& fn);

// Always-serial variant, kept callable for the identity checks.
void run_indexed_serial(std::size_t n, const std::function<void(std::size_t)>& fn);

int max_threads();
bool openmp_enabled();

}  // namespace mde
