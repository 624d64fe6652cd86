#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// Deterministic data-parallel reductions. Sums are accumulated per fixed-size
// index block and combined serially in block order, so the result is
// bit-identical for any thread count. Serial reference versions are kept for
// tests and the benchmark target.
namespace erlmix::par {

inline constexpr std::int64_t kBlock = 1024;

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int t) {
#ifdef _OPENMP
    if (t > 0) omp_set_num_threads(t);
#else
    (void)t;
#endif
}

template <class F>
double block_sum_serial(std::int64_t count, F&& term) {
    double total = 0.0;
    for (std::int64_t i = 0; i < count; ++i) total += term(i);
    return total;
}

template <class F>
double block_sum(std::int64_t count, F&& term) {
    if (count <= 0) return 0.0;
    const std::int64_t nblocks = (count + kBlock - 1) / kBlock;
    std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t lo = b * kBlock;
        const std::int64_t hi = std::min(count, lo + kBlock);
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

template <class F>
double grid_max_serial(std::int64_t count, F&& value) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < count; ++i) best = std::max(best, value(i));
    return best;
}

template <class F>
double grid_max(std::int64_t count, F&& value) {
    if (count <= 0) return -std::numeric_limits<double>::infinity();
    const std::int64_t nblocks = (count + kBlock - 1) / kBlock;
    std::vector<double> partial(static_cast<std::size_t>(nblocks),
                                -std::numeric_limits<double>::infinity());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t lo = b * kBlock;
        const std::int64_t hi = std::min(count, lo + kBlock);
        double m = -std::numeric_limits<double>::infinity();
        for (std::int64_t i = lo; i < hi; ++i) m = std::max(m, value(i));
        partial[static_cast<std::size_t>(b)] = m;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (double m : partial) best = std::max(best, m);
    return best;
}

}  // namespace erlmix::par
