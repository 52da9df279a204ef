#include <benchmark/benchmark.h>

#include <random>

#include "gait/divergence.hpp"
#include "gait/kernels.hpp"

namespace {

void BM_empirical_divergence(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0)) / 2;
    const int m = static_cast<int>(state.range(0)) - n;
    std::mt19937_64 eng(31);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd x(n, 2), y(m, 2);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = gauss(eng);
        x(i, 1) = gauss(eng);
    }
    for (int i = 0; i < m; ++i) {
        y(i, 0) = gauss(eng);
        y(i, 1) = gauss(eng);
    }
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / n);
    const Eigen::VectorXd q = Eigen::VectorXd::Constant(m, 1.0 / m);
    const gait::KernelSpec spec = gait::KernelSpec::rbf_sq(1.0);
    for (auto _ : state) {
        const gait::BlockGram blocks = gait::build_block_gram(x, y, spec);
        benchmark::DoNotOptimize(gait::gait_divergence_empirical(blocks, p, q).value);
    }
    state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_empirical_divergence)->RangeMultiplier(2)->Range(256, 2048)->Complexity();
