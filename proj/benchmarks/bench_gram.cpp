#include <benchmark/benchmark.h>

#include <random>

#include "gait/kernels.hpp"

namespace {

Eigen::MatrixXd random_points(int n, int d) {
    std::mt19937_64 eng(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd points(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) points(i, j) = gauss(eng);
    return points;
}

void BM_build_gram_rbf(benchmark::State& state) {
    const Eigen::MatrixXd points = random_points(static_cast<int>(state.range(0)), 8);
    const gait::KernelSpec spec = gait::KernelSpec::rbf_sq(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(gait::build_gram(points, spec).K.sum());
    state.SetComplexityN(state.range(0));
}

void BM_build_gram_exp_metric(benchmark::State& state) {
    const Eigen::MatrixXd points = random_points(static_cast<int>(state.range(0)), 8);
    const gait::KernelSpec spec = gait::KernelSpec::exp_metric(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(gait::build_gram(points, spec).K.sum());
    state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_build_gram_rbf)->RangeMultiplier(2)->Range(64, 1024)->Complexity();
BENCHMARK(BM_build_gram_exp_metric)->RangeMultiplier(2)->Range(64, 1024)->Complexity();
