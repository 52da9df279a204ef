#pragma once

#include <Eigen/Dense>
#include <optional>

#include "gait/kernels.hpp"

// Effective-mode estimation for a sample: sweep the kernel bandwidth and
// read the diversity exp(H_1), or sweep a collision threshold and apply the
// birthday-paradox support estimate. Scale selection picks the first point
// where the smoothed second derivative of the curve flattens out.

namespace gait {

struct SweepResult {
    Eigen::VectorXd scales;                  // strictly increasing
    Eigen::VectorXd values;                  // H_1 or log(n_hat) per scale
    Eigen::VectorXd smoothed_second_deriv;   // filled by curvature_select
    std::optional<int> selected_index;       // index into scales
};

// H_1 of the weighted sample under rbf_sq at each bandwidth in scales.
// An empty weights vector means uniform.
SweepResult diversity_sweep(const Eigen::MatrixXd& points, const Eigen::VectorXd& weights,
                            const Eigen::VectorXd& scales);

// Savitzky-Golay smoothing: local least-squares polynomial fit of the given
// degree over a centered window; window shrinks symmetrically at the edges.
Eigen::VectorXd savitzky_golay_smooth(const Eigen::VectorXd& y, int window, int degree);

// Smooths the discrete second difference of sweep.values (index spacing)
// and selects the first scale where its magnitude drops below threshold.
SweepResult curvature_select(SweepResult sweep, int window = 11, int degree = 3,
                             double threshold = 0.01);

// Birthday-paradox support estimate n_hat = m(m-1)/c, where c counts the
// ordered pairs at distance below epsilon. Returns +inf when there are no
// collisions. Distance is the given p-norm (Euclidean by default).
double birthday_estimate(const Eigen::MatrixXd& points, double epsilon, double norm_order = 2.0);

// log(n_hat) per collision threshold; feeds curvature_select like the
// diversity path.
SweepResult birthday_sweep(const Eigen::MatrixXd& points, const Eigen::VectorXd& epsilons,
                           double norm_order = 2.0);

}  // namespace gait
