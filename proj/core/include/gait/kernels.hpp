#pragma once

#include <Eigen/Dense>

#include "gait/types.hpp"

// Similarity kernels and Gram construction. Three families are supported:
//   rbf_sq:     k(x,y) = exp(-|x-y|^2 / (2 sigma^2))
//   exp_metric: k(x,y) = exp(-|x-y|_p / sigma),  norm order p >= 1
//   polynomial: k(x,y) = 1 / (1 + |x-y|^s)
// All satisfy k(x,x) = 1, symmetry and range [0,1].

namespace gait {

enum class KernelFamily { rbf_sq, exp_metric, polynomial };

struct KernelSpec {
    KernelFamily family = KernelFamily::rbf_sq;
    double sigma = 1.0;       // rbf_sq and exp_metric bandwidth
    double norm_order = 2.0;  // exp_metric metric order, >= 1
    double exponent = 1.5;    // polynomial exponent, > 0

    static KernelSpec rbf_sq(double sigma);
    static KernelSpec exp_metric(double sigma, double norm_order = 2.0);
    static KernelSpec polynomial(double exponent);

    void validate() const;
};

double kernel_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const KernelSpec& spec);

// Gram matrix over one point set (points are rows). Entries are clamped to
// [0,1] to absorb floating-point overshoot; the diagonal is exactly 1.
SimilaritySpace build_gram(const Eigen::MatrixXd& points, const KernelSpec& spec);

// Gram blocks over two point sets with a shared coordinate dimension.
BlockGram build_block_gram(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                           const KernelSpec& spec);

// Analytic gradient of k(x, y) with respect to x. For the nonsmooth families
// (exp_metric, polynomial) the kernel is not differentiable at x == y; there
// the zero subgradient is returned and *degenerate is set when provided.
Eigen::VectorXd kernel_grad_x(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                              const KernelSpec& spec, bool* degenerate = nullptr);

// 1-D Gaussian Gram factor over d grid coordinates normalized to [0, 1].
Eigen::MatrixXd gaussian_grid_factor(int d, double sigma);

// Applies the rbf_sq Gram over all d^2 pixel coordinates to a d x d grid as
// two one-dimensional passes, G * V * G, in O(d^3) instead of O(d^4).
Eigen::MatrixXd conv_apply(const Eigen::MatrixXd& grid, double sigma);
Eigen::MatrixXd conv_apply(const GridMeasure& image, double sigma);

}  // namespace gait
