// Serial vs OpenMP reductions on representative workloads: the grid supremum
// behind sup-norm error measurement and a Monte Carlo style block sum.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "erlmix/densities.hpp"
#include "erlmix/operator.hpp"
#include "erlmix/parallel.hpp"

namespace {

const erlmix::DensitySpec& bump() {
    static const auto f = [] {
        erlmix::ZooParams p;
        p.alpha = 1.0;
        return erlmix::zoo_density("holder_bump", 1, p);
    }();
    return f;
}

double grid_point_error(std::int64_t i, std::int64_t grid, int n) {
    const std::vector<double> x{static_cast<double>(i) /
                                static_cast<double>(grid - 1)};
    return std::abs(erlmix::operator_eval(bump(), n, x, 1e-10) -
                    bump().evaluate(x));
}

void BM_grid_sup_serial(benchmark::State& state) {
    const std::int64_t grid = state.range(0);
    const int n = 32;
    for (auto _ : state) {
        benchmark::DoNotOptimize(erlmix::par::grid_max_serial(
            grid, [&](std::int64_t i) { return grid_point_error(i, grid, n); }));
    }
}
BENCHMARK(BM_grid_sup_serial)->Arg(256)->Arg(1024);

void BM_grid_sup_parallel(benchmark::State& state) {
    const std::int64_t grid = state.range(0);
    const int n = 32;
    for (auto _ : state) {
        benchmark::DoNotOptimize(erlmix::par::grid_max(
            grid, [&](std::int64_t i) { return grid_point_error(i, grid, n); }));
    }
}
BENCHMARK(BM_grid_sup_parallel)->Arg(256)->Arg(1024);

double mc_term(std::int64_t i) {
    double acc = 0.0;
    for (int k = 0; k < 64; ++k)
        acc += std::exp(-std::abs(std::sin(static_cast<double>(i) + k)));
    return acc;
}

void BM_block_sum_serial(benchmark::State& state) {
    const std::int64_t count = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(erlmix::par::block_sum_serial(count, mc_term));
}
BENCHMARK(BM_block_sum_serial)->Arg(1 << 14)->Arg(1 << 17);

void BM_block_sum_parallel(benchmark::State& state) {
    const std::int64_t count = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(erlmix::par::block_sum(count, mc_term));
}
BENCHMARK(BM_block_sum_parallel)->Arg(1 << 14)->Arg(1 << 17);

}  // namespace

BENCHMARK_MAIN();
