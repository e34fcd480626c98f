#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace soblab {

// Global switch between the OpenMP kernels and the serial reference path.
// Tests flip this to verify that both paths produce bit-identical results.
inline bool& parallel_enabled() {
    static bool enabled = true;
    return enabled;
}

// Chunked sum with a fixed reduction order: terms are accumulated serially
// within each chunk and the chunk partials are combined in index order, so
// the result does not depend on the number of threads.
template <class F>
double deterministic_sum(std::int64_t count, F&& term, std::int64_t chunk = 8192) {
    if (count <= 0) return 0.0;
    const std::int64_t nchunks = (count + chunk - 1) / chunk;
    std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (std::int64_t c = 0; c < nchunks; ++c) {
        const std::int64_t lo = c * chunk;
        const std::int64_t hi = std::min(count, lo + chunk);
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(c)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

// Independent per-index work; each index writes only its own slots.
template <class F>
void parallel_for(std::int64_t count, F&& body) {
#pragma omp parallel for schedule(static) if (parallel_enabled())
    for (std::int64_t i = 0; i < count; ++i) body(i);
}

}  // namespace soblab
