#pragma once

#include <Eigen/Dense>
#include <utility>

#include "gait/kernels.hpp"
#include "gait/types.hpp"

// Bregman divergence of the negative order-1 entropy:
//   D(p||q) = 1 + E_p[log(Kp/Kq)] - E_q[Kp/Kq]
// For distributions with disjoint supports the Gram over the union has
// block structure and the divergence becomes
//   D(p||q) = 1 + <p, log(K_xx p / K_xy q)> - <q, K_yx p / K_yy q>.
// Reduces to Kullback-Leibler when K = I.

namespace gait {

struct DivergenceReport {
    double value = 0.0;
    double term_log = 0.0;    // <p, log(K_xx p / K_xy q)>
    double term_ratio = 0.0;  // <q, K_yx p / K_yy q>
    // Set when some atom of p sees q at similarity exactly zero. Kept as a
    // distinguished flag so optimizers can treat the state as a barrier;
    // value is +inf in that case and the term decomposition is not valid.
    bool infinite = false;
};

// Divergence between two distributions on one shared space. Returns +inf
// under the usual convention when supp(p) meets a zero of Kq.
double gait_divergence_shared(const SimilaritySpace& space, const DiscreteDistribution& p,
                              const DiscreteDistribution& q);

DivergenceReport gait_divergence_empirical(const BlockGram& blocks, const Eigen::VectorXd& p,
                                           const Eigen::VectorXd& q);

// Unconstrained gradients of the empirical divergence in the weights; the
// simplex constraint is handled by the caller (softmax parameterization or
// tangent projection).
std::pair<Eigen::VectorXd, Eigen::VectorXd> divergence_grad_weights(const BlockGram& blocks,
                                                                    const Eigen::VectorXd& p,
                                                                    const Eigen::VectorXd& q);

struct AtomGradients {
    Eigen::MatrixXd x_grad;  // n x d
    Eigen::MatrixXd y_grad;  // m x d
    bool degenerate = false;  // coincident atoms hit a nonsmooth kernel point
};

// Gradients of the empirical divergence in the atom locations, via the
// kernel gradient chain rule.
AtomGradients divergence_grad_atoms(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                    const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                                    const KernelSpec& spec);

// (D(p||q), D(q||p)) sharing one block Gram; the reversed direction reuses
// the same blocks with roles swapped.
std::pair<double, double> forward_backward(const BlockGram& blocks, const Eigen::VectorXd& p,
                                           const Eigen::VectorXd& q);

}  // namespace gait
