#pragma once

#include <Eigen/Dense>
#include <limits>

#include "gait/types.hpp"

// Similarity-sensitive entropy of order alpha on a finite similarity space:
//   H_alpha(p) = log M_{p, 1-alpha}(1 / Kp)
// where M is the weighted power mean. The order-1 case has the closed form
// H_1(p) = -<p, log(Kp)> and is the basis for the divergence and the
// gradient-based solvers. Sums run over the support of p.

namespace gait {

inline constexpr double kAlphaInf = std::numeric_limits<double>::infinity();

// Kp: expected similarity of each element to a p-distributed sample.
Eigen::VectorXd similarity_profile(const SimilaritySpace& space, const DiscreteDistribution& p);

// Weighted power mean M_{w,beta}(x) = <w, x^beta>^(1/beta), with the
// geometric mean at beta = 0 and min/max over supp(w) at beta = -/+inf.
double power_mean(const Eigen::VectorXd& w, const Eigen::VectorXd& x, double beta);

double gait_entropy(const SimilaritySpace& space, const DiscreteDistribution& p, double alpha);

// exp(H): the effective number of points at the kernel's scale.
double diversity(const SimilaritySpace& space, const DiscreteDistribution& p, double alpha);

// Gradient of H_1 at interior p: -log(Kp) - K(p / Kp). Throws if p has zero
// entries; solvers use detail::entropy_grad_raw on softmax iterates instead.
Eigen::VectorXd entropy_grad(const SimilaritySpace& space, const DiscreteDistribution& p);

// Negative Hessian of H_1:
//   diag(1/Kp) K + K diag(1/Kp) - K diag(p/(Kp)^2) K
// symmetric; positive definiteness on the simplex tangent space is the
// open conjecture probed by the verify module.
Eigen::MatrixXd neg_entropy_hessian(const SimilaritySpace& space, const DiscreteDistribution& p);

namespace detail {

// Unchecked gradient of H_1 for optimizer iterates. Guards Kp away from
// zero so boundary-adjacent softmax outputs produce large finite ascent
// directions instead of infinities.
Eigen::VectorXd entropy_grad_raw(const Eigen::MatrixXd& K, const Eigen::VectorXd& p);

double entropy_alpha1_raw(const Eigen::MatrixXd& K, const Eigen::VectorXd& p);

}  // namespace detail

}  // namespace gait
