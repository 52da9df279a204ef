#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gait/types.hpp"

// Joint entropy, conditional entropy and mutual information at order 1 for
// finite joint distributions whose variables live on similarity spaces.
// The joint entropy is the entropy of the joint table under the tensor
// product kernel; tensor Grams are applied through the identity
// (K (x) L) vec(P) = vec(K P L) and never materialized.

namespace gait {

struct JointDistribution {
    Eigen::MatrixXd table;  // n x m, nonnegative, sums to 1
    SimilaritySpace space_x;  // K, n x n
    SimilaritySpace space_y;  // Lambda, m x m

    static JointDistribution make(Eigen::MatrixXd table, SimilaritySpace space_x,
                                  SimilaritySpace space_y);

    Eigen::VectorXd marginal_x() const { return table.rowwise().sum(); }
    Eigen::VectorXd marginal_y() const { return table.colwise().sum(); }
};

struct TripleJointDistribution {
    // table[z] is the n x m slice P(., ., z).
    std::vector<Eigen::MatrixXd> table;
    SimilaritySpace space_x;  // K
    SimilaritySpace space_y;  // Lambda
    SimilaritySpace space_z;  // Theta

    static TripleJointDistribution make(std::vector<Eigen::MatrixXd> table,
                                        SimilaritySpace space_x, SimilaritySpace space_y,
                                        SimilaritySpace space_z);
};

// H[X,Y] = -sum_xy P_xy log((K P Lambda)_xy), over supp(P).
double joint_entropy(const JointDistribution& j);

// H[X|Y] = H[X,Y] - H[Y].
double conditional_entropy(const JointDistribution& j);

// I[X;Y] = H[X] + H[Y] - H[X,Y].
double mutual_information(const JointDistribution& j);

// Triple-table entropies and the conditional mutual information
// I[X;Y|Z] = H[X|Z] + H[Y|Z] - H[X,Y|Z], expanded via joint entropies.
double joint_entropy3(const TripleJointDistribution& j);
double conditional_mutual_information(const TripleJointDistribution& j);

// I[X;(Y,Z)] with the pair (Y,Z) carrying the tensor Gram Lambda (x) Theta.
double mutual_information_x_yz(const TripleJointDistribution& j);

struct DpiReport {
    double i_xz = 0.0;        // I[X;Z]
    double i_xy = 0.0;        // I[X;Y]
    double i_xz_given_y = 0.0;
    double slack = 0.0;       // I[X;Y] + I[X;Z|Y] - I[X;Z]
    bool pass = false;        // slack >= -tolerance
};

// Data processing inequality check for a Markov chain X -> Y -> Z:
// I[X;Z] <= I[X;Y] + I[X;Z|Y]. The joint must factor as P(x)P(y|x)P(z|y)
// within 1e-12, otherwise an exception is thrown.
DpiReport check_dpi(const TripleJointDistribution& chain, double tolerance = 1e-10);

}  // namespace gait
