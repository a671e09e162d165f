#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bmst {

// Number of worker threads to actually use: 0 means "auto" (the OpenMP
// default when built with it, otherwise 1).
inline int resolve_workers(int requested) {
    if (requested < 0) throw std::invalid_argument("worker count cannot be negative");
    if (requested > 0) return requested;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Splits [0, total) into fixed-size batches and calls fn(batch_index, begin,
// end) once per batch, possibly concurrently. Batch boundaries depend only on
// (total, batch_size), never on the worker count, so a caller that derives
// per-batch RNG substreams and merges per-batch results in index order gets
// bit-identical output from serial and parallel runs.
template <typename Fn>
void parallel_batches(uint64_t total, uint64_t batch_size, int workers, Fn&& fn) {
    if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
    const uint64_t nbatches = (total + batch_size - 1) / batch_size;
    const int w = resolve_workers(workers);
#ifdef _OPENMP
    if (w > 1 && nbatches > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(w)
        for (int64_t b = 0; b < static_cast<int64_t>(nbatches); ++b) {
            const uint64_t begin = static_cast<uint64_t>(b) * batch_size;
            fn(static_cast<uint64_t>(b), begin, std::min(begin + batch_size, total));
        }
        return;
    }
#else
    (void)w;
#endif
    for (uint64_t b = 0; b < nbatches; ++b) {
        const uint64_t begin = b * batch_size;
        fn(b, begin, std::min(begin + batch_size, total));
    }
}

} // namespace bmst
