#pragma once

#include <Eigen/Dense>
#include <stdexcept>

// Core value types shared across the library: similarity spaces (Gram
// matrices with unit diagonal), distributions on the simplex, weighted
// atomic measures and image-like grid measures. All types are immutable
// after construction and validate their invariants on entry.

namespace gait {

// Entries of p below this threshold are treated as zero mass (the 0*log(0)
// convention under floating point).
inline constexpr double kSupportThreshold = 1e-15;

inline constexpr double kSimplexTolerance = 1e-12;

// Finite similarity space: an n x n symmetric Gram matrix with unit
// diagonal and entries in [0, 1].
struct SimilaritySpace {
    enum class Provenance { from_points, explicit_matrix };

    Eigen::MatrixXd K;
    Provenance provenance = Provenance::explicit_matrix;

    int size() const { return static_cast<int>(K.rows()); }

    // Validates symmetry and unit diagonal (tolerance 1e-12), then enforces
    // the invariants exactly: diagonal reset to 1, entries clamped to [0,1].
    static SimilaritySpace from_matrix(Eigen::MatrixXd m);

    static SimilaritySpace identity(int n);
    static SimilaritySpace all_ones(int n);

    // Trusted constructor used by gram builders; assumes invariants hold.
    static SimilaritySpace from_points_internal(Eigen::MatrixXd m);
};

// Probability vector on the simplex, tied by size to a SimilaritySpace.
struct DiscreteDistribution {
    Eigen::VectorXd p;

    int size() const { return static_cast<int>(p.size()); }

    static DiscreteDistribution from_vector(Eigen::VectorXd w);
    static DiscreteDistribution uniform(int n);
};

// Partitioned Gram matrix over the union of two supports. K_yx is the
// transpose of K_xy and never stored.
struct BlockGram {
    Eigen::MatrixXd K_xx;  // n x n
    Eigen::MatrixXd K_xy;  // n x m
    Eigen::MatrixXd K_yy;  // m x m

    int n() const { return static_cast<int>(K_xx.rows()); }
    int m() const { return static_cast<int>(K_yy.rows()); }

    // Same blocks viewed from the other side: (y, x) with K_xy transposed.
    BlockGram reversed() const { return {K_yy, K_xy.transpose(), K_xx}; }
};

// Weighted atoms in R^d: locations (one atom per row) plus simplex weights.
struct EmpiricalMeasure {
    Eigen::MatrixXd atoms;    // m x d
    Eigen::VectorXd weights;  // in the simplex

    int count() const { return static_cast<int>(atoms.rows()); }
    int dim() const { return static_cast<int>(atoms.cols()); }

    static EmpiricalMeasure from_parts(Eigen::MatrixXd atoms, Eigen::VectorXd weights);
    static EmpiricalMeasure uniform_on(Eigen::MatrixXd atoms);
};

// Square nonnegative intensity grid normalized to total mass 1, viewed as a
// measure over pixel coordinates on the unit square.
struct GridMeasure {
    Eigen::MatrixXd intensity;

    int side() const { return static_cast<int>(intensity.rows()); }

    // Validates nonnegativity and squareness, normalizes to mass 1.
    static GridMeasure from_intensity(Eigen::MatrixXd raw);

    // Column-major flattening used consistently across the library.
    Eigen::VectorXd flattened() const {
        return Eigen::Map<const Eigen::VectorXd>(intensity.data(), intensity.size());
    }
};

}  // namespace gait
