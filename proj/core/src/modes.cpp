#include "gait/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gait/entropy.hpp"
#include "gait/threading.hpp"

namespace gait {

namespace {

void check_scales(const Eigen::VectorXd& scales, int minimum) {
    if (scales.size() < minimum) throw std::invalid_argument("sweep: too few scales");
    for (Eigen::Index i = 0; i + 1 < scales.size(); ++i)
        if (!(scales[i] < scales[i + 1]))
            throw std::invalid_argument("sweep: scales must be strictly increasing");
    if (!(scales[0] > 0.0)) throw std::invalid_argument("sweep: scales must be positive");
}

double pair_distance(const Eigen::MatrixXd& points, int i, int j, double norm_order) {
    const Eigen::VectorXd diff = points.row(i) - points.row(j);
    if (norm_order == 2.0) return diff.norm();
    if (norm_order == 1.0) return diff.lpNorm<1>();
    double acc = 0.0;
    for (Eigen::Index k = 0; k < diff.size(); ++k)
        acc += std::pow(std::abs(diff[k]), norm_order);
    return std::pow(acc, 1.0 / norm_order);
}

}  // namespace

SweepResult diversity_sweep(const Eigen::MatrixXd& points, const Eigen::VectorXd& weights,
                            const Eigen::VectorXd& scales) {
    if (points.rows() < 1) throw std::invalid_argument("diversity_sweep: empty sample");
    check_scales(scales, 3);
    const int n = static_cast<int>(points.rows());
    Eigen::VectorXd w = weights.size() == 0 ? Eigen::VectorXd::Constant(n, 1.0 / n) : weights;
    const DiscreteDistribution dist = DiscreteDistribution::from_vector(w);

    // Squared distances once; each scale only re-exponentiates.
    Eigen::MatrixXd sq(n, n);
    for (int i = 0; i < n; ++i) {
        sq(i, i) = 0.0;
        for (int j = 0; j < i; ++j) {
            const double d2 = (points.row(i) - points.row(j)).squaredNorm();
            sq(i, j) = d2;
            sq(j, i) = d2;
        }
    }

    SweepResult result;
    result.scales = scales;
    result.values.resize(scales.size());
    threading::parallel_for(scales.size(), [&](long lo, long hi) {
        for (long s = lo; s < hi; ++s) {
            const double denom = 2.0 * scales[s] * scales[s];
            Eigen::VectorXd profile = ((-sq / denom).array().exp().matrix() * dist.p);
            double h = 0.0;
            for (int i = 0; i < n; ++i)
                if (dist.p[i] > kSupportThreshold) h -= dist.p[i] * std::log(profile[i]);
            result.values[s] = h;
        }
    });
    return result;
}

Eigen::VectorXd savitzky_golay_smooth(const Eigen::VectorXd& y, int window, int degree) {
    if (window % 2 == 0 || window <= degree)
        throw std::invalid_argument("savitzky_golay: window must be odd and exceed the degree");
    const int n = static_cast<int>(y.size());
    const int half = window / 2;
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        // Shrink the window symmetrically near the edges.
        const int h = std::min({half, i, n - 1 - i});
        const int w = 2 * h + 1;
        const int deg = std::min(degree, w - 1);
        // Least-squares fit of a degree-deg polynomial over offsets [-h, h];
        // the smoothed value is the fit at offset 0.
        Eigen::MatrixXd design(w, deg + 1);
        Eigen::VectorXd rhs(w);
        for (int k = -h; k <= h; ++k) {
            double power = 1.0;
            for (int c = 0; c <= deg; ++c) {
                design(k + h, c) = power;
                power *= k;
            }
            rhs(k + h) = y[i + k];
        }
        const Eigen::VectorXd coeffs =
            design.colPivHouseholderQr().solve(rhs);
        out[i] = coeffs[0];
    }
    return out;
}

SweepResult curvature_select(SweepResult sweep, int window, int degree, double threshold) {
    if (window % 2 == 0 || window <= degree)
        throw std::invalid_argument("curvature_select: window must be odd and exceed the degree");
    check_scales(sweep.scales, 3);
    if (sweep.values.size() != sweep.scales.size())
        throw std::invalid_argument("curvature_select: scales/values length mismatch");
    if (sweep.values.size() < window)
        throw std::invalid_argument("curvature_select: needs at least `window` points");

    const int n = static_cast<int>(sweep.values.size());
    // Discrete second difference with respect to the scale index; defined at
    // interior indices 1 .. n-2.
    Eigen::VectorXd d2(n - 2);
    for (int i = 1; i + 1 < n; ++i)
        d2[i - 1] = sweep.values[i + 1] - 2.0 * sweep.values[i] + sweep.values[i - 1];

    // Positions whose smoothing window touches a non-finite value (e.g. a
    // no-collision birthday entry) are excluded from selection.
    Eigen::VectorXd smoothed;
    if (d2.allFinite()) {
        smoothed = savitzky_golay_smooth(d2, window, degree);
    } else {
        smoothed = Eigen::VectorXd::Constant(d2.size(), std::numeric_limits<double>::infinity());
        const int half = window / 2;
        for (int i = 0; i < d2.size(); ++i) {
            const int h = std::min<int>({half, i, static_cast<int>(d2.size()) - 1 - i});
            if (d2.segment(i - h, 2 * h + 1).allFinite()) {
                const Eigen::VectorXd local =
                    savitzky_golay_smooth(d2.segment(i - h, 2 * h + 1), window, degree);
                smoothed[i] = local[h];
            }
        }
    }

    sweep.smoothed_second_deriv.resize(n);
    sweep.smoothed_second_deriv[0] = std::numeric_limits<double>::quiet_NaN();
    sweep.smoothed_second_deriv[n - 1] = std::numeric_limits<double>::quiet_NaN();
    sweep.smoothed_second_deriv.segment(1, n - 2) = smoothed;

    sweep.selected_index.reset();
    for (int i = 0; i < smoothed.size(); ++i) {
        if (std::isfinite(smoothed[i]) && std::abs(smoothed[i]) < threshold) {
            sweep.selected_index = i + 1;  // back to scale indexing
            break;
        }
    }
    return sweep;
}

double birthday_estimate(const Eigen::MatrixXd& points, double epsilon, double norm_order) {
    const int m = static_cast<int>(points.rows());
    if (m < 2) throw std::invalid_argument("birthday_estimate: needs at least two samples");
    if (!(epsilon > 0.0)) throw std::invalid_argument("birthday_estimate: epsilon must be positive");
    long collisions = 0;  // ordered pairs, both (i,j) and (j,i)
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j)
            if (pair_distance(points, i, j, norm_order) < epsilon) collisions += 2;
    if (collisions == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(m) * (m - 1) / static_cast<double>(collisions);
}

SweepResult birthday_sweep(const Eigen::MatrixXd& points, const Eigen::VectorXd& epsilons,
                           double norm_order) {
    check_scales(epsilons, 3);
    const int m = static_cast<int>(points.rows());
    if (m < 2) throw std::invalid_argument("birthday_sweep: needs at least two samples");

    // Sort pairwise distances once; the collision count at epsilon is the
    // number of distances strictly below it.
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j) dists.push_back(pair_distance(points, i, j, norm_order));
    std::sort(dists.begin(), dists.end());

    SweepResult result;
    result.scales = epsilons;
    result.values.resize(epsilons.size());
    for (Eigen::Index s = 0; s < epsilons.size(); ++s) {
        const long unordered =
            std::lower_bound(dists.begin(), dists.end(), epsilons[s]) - dists.begin();
        const long collisions = 2 * unordered;
        result.values[s] = collisions == 0
                               ? std::numeric_limits<double>::infinity()
                               : std::log(static_cast<double>(m) * (m - 1) / collisions);
    }
    return result;
}

}  // namespace gait
