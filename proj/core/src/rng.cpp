#include "gait/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gait::rng {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    // SplitMix64 finalizer over the combined state.
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double uniform(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

int uniform_int(Engine& eng, int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    // Multiply-shift map of the full 64-bit draw onto the range.
    const auto wide = static_cast<unsigned __int128>(eng()) * range;
    return lo + static_cast<int>(wide >> 64);
}

double normal(Engine& eng) {
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform01(eng);
    const double u2 = uniform01(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double normal(Engine& eng, double mean, double stddev) {
    return mean + stddev * normal(eng);
}

double gamma(Engine& eng, double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
    if (shape < 1.0) {
        const double u = uniform01(eng);
        // Underflows to zero for tiny shapes; callers treat that as a
        // zero-mass coordinate.
        return gamma(eng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze method.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x;
        double v;
        do {
            x = normal(eng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01(eng);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

Eigen::VectorXd dirichlet(Engine& eng, const Eigen::VectorXd& alpha) {
    Eigen::VectorXd draw(alpha.size());
    for (Eigen::Index i = 0; i < alpha.size(); ++i) draw[i] = gamma(eng, alpha[i]);
    const double total = draw.sum();
    if (total <= 0.0) {
        // All gammas underflowed; fall back to a point mass on the largest
        // shape so the draw stays on the simplex.
        Eigen::Index arg = 0;
        alpha.maxCoeff(&arg);
        draw.setZero();
        draw[arg] = 1.0;
        return draw;
    }
    return draw / total;
}

}  // namespace gait::rng
