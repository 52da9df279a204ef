#include <benchmark/benchmark.h>

#include <random>

#include "gait/kernels.hpp"

namespace {

Eigen::MatrixXd random_grid(int d) {
    std::mt19937_64 eng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::MatrixXd grid(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) grid(r, c) = unif(eng);
    return grid;
}

// Separable application, O(d^3).
void BM_conv_apply(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const Eigen::MatrixXd grid = random_grid(d);
    for (auto _ : state) benchmark::DoNotOptimize(gait::conv_apply(grid, 0.1).sum());
    state.SetComplexityN(d);
}

// Naive per-pixel-pair application, O(d^4), for comparison.
void BM_dense_apply(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const Eigen::MatrixXd grid = random_grid(d);
    const Eigen::MatrixXd g1 = gait::gaussian_grid_factor(d, 0.1);
    for (auto _ : state) {
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                double acc = 0.0;
                for (int r2 = 0; r2 < d; ++r2) {
                    const double kr = g1(r, r2);
                    for (int c2 = 0; c2 < d; ++c2) acc += kr * g1(c, c2) * grid(r2, c2);
                }
                out(r, c) = acc;
            }
        benchmark::DoNotOptimize(out.sum());
    }
    state.SetComplexityN(d);
}

}  // namespace

BENCHMARK(BM_conv_apply)->RangeMultiplier(2)->Range(16, 256)->Complexity();
BENCHMARK(BM_dense_apply)->RangeMultiplier(2)->Range(16, 128)->Complexity();
