#pragma once

// Independent reference computations for the test suite: finite-difference
// derivatives, brute-force Shannon/Renyi/KL, and the dense pixel-Gram
// product. These must stay independent of the library paths they check.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>

namespace oracle {

using Objective = std::function<double(const Eigen::VectorXd&)>;

inline Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x,
                                   double h = 1e-6) {
    Eigen::VectorXd grad(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double hi = f(probe);
        probe[i] = x[i] - h;
        const double lo = f(probe);
        probe[i] = x[i];
        grad[i] = (hi - lo) / (2.0 * h);
    }
    return grad;
}

inline Eigen::MatrixXd fd_hessian(const Objective& f, const Eigen::VectorXd& x,
                                  double h = 1e-4) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd hess(n, n);
    Eigen::VectorXd probe = x;
    const double center = f(x);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            double value;
            if (i == j) {
                probe[i] = x[i] + h;
                const double fuu = f(probe);
                probe[i] = x[i] - h;
                const double fdd = f(probe);
                probe[i] = x[i];
                value = (fuu - 2.0 * center + fdd) / (h * h);
            } else {
                probe[i] = x[i] + h;
                probe[j] = x[j] + h;
                const double fpp = f(probe);
                probe[j] = x[j] - h;
                const double fpm = f(probe);
                probe[i] = x[i] - h;
                const double fmm = f(probe);
                probe[j] = x[j] + h;
                const double fmp = f(probe);
                probe[i] = x[i];
                probe[j] = x[j];
                value = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            }
            hess(i, j) = value;
            hess(j, i) = value;
        }
    }
    return hess;
}

inline double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double denom = std::max(1e-12, std::max(a.norm(), b.norm()));
    return (a - b).norm() / denom;
}

inline double shannon(const Eigen::VectorXd& p) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] > 1e-15) h -= p[i] * std::log(p[i]);
    return h;
}

inline double renyi(const Eigen::VectorXd& p, double alpha) {
    if (std::isinf(alpha)) return -std::log(p.maxCoeff());
    if (alpha == 1.0) return shannon(p);
    if (alpha == 0.0) {
        long support = 0;
        for (Eigen::Index i = 0; i < p.size(); ++i)
            if (p[i] > 1e-15) ++support;
        return std::log(static_cast<double>(support));
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] > 1e-15) acc += std::pow(p[i], alpha);
    return std::log(acc) / (1.0 - alpha);
}

inline double kl(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] <= 1e-15) continue;
        if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
        acc += p[i] * std::log(p[i] / q[i]);
    }
    return acc;
}

// Dense rbf_sq Gram over the d x d pixel grid with coordinates normalized to
// [0,1]^2, flattened column-major (index = row + col*d).
inline Eigen::MatrixXd dense_pixel_gram(int d, double sigma) {
    const int n = d * d;
    Eigen::MatrixXd K(n, n);
    const double denom = 2.0 * sigma * sigma;
    for (int a = 0; a < n; ++a) {
        const double r1 = d == 1 ? 0.0 : static_cast<double>(a % d) / (d - 1);
        const double c1 = d == 1 ? 0.0 : static_cast<double>(a / d) / (d - 1);
        for (int b = 0; b < n; ++b) {
            const double r2 = d == 1 ? 0.0 : static_cast<double>(b % d) / (d - 1);
            const double c2 = d == 1 ? 0.0 : static_cast<double>(b / d) / (d - 1);
            const double sq = (r1 - r2) * (r1 - r2) + (c1 - c2) * (c1 - c2);
            K(a, b) = std::exp(-sq / denom);
        }
    }
    return K;
}

// Deterministic random inputs for the tests.
inline Eigen::MatrixXd random_points(std::mt19937_64& eng, int n, int d, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    Eigen::MatrixXd points(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) points(i, j) = gauss(eng);
    return points;
}

// Interior simplex point with coordinates bounded away from zero.
inline Eigen::VectorXd random_interior_simplex(std::mt19937_64& eng, int n, double floor = 0.02) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = -std::log(unif(eng) + 1e-300);
    w /= w.sum();
    w = (1.0 - floor * n) * w + Eigen::VectorXd::Constant(n, floor);
    return w / w.sum();
}

inline Eigen::VectorXd random_simplex(std::mt19937_64& eng, int n) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = -std::log(unif(eng) + 1e-300);
    return w / w.sum();
}

}  // namespace oracle
