#include "gait/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace gait {

namespace {

void check_match(const SimilaritySpace& space, const DiscreteDistribution& p, const char* what) {
    if (space.size() != p.size())
        throw std::invalid_argument(std::string(what) + ": space/distribution size mismatch");
}

}  // namespace

Eigen::VectorXd similarity_profile(const SimilaritySpace& space, const DiscreteDistribution& p) {
    check_match(space, p, "similarity_profile");
    return space.K * p.p;
}

double power_mean(const Eigen::VectorXd& w, const Eigen::VectorXd& x, double beta) {
    if (w.size() != x.size()) throw std::invalid_argument("power_mean: size mismatch");
    if (w.size() < 1) throw std::invalid_argument("power_mean: empty input");

    // Support of w; x must be positive there.
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w[i] <= 0.0) continue;
        if (!(x[i] > 0.0))
            throw std::invalid_argument("power_mean: nonpositive value on the support");
        x_min = std::min(x_min, x[i]);
        x_max = std::max(x_max, x[i]);
    }
    if (!(x_max > 0.0)) throw std::invalid_argument("power_mean: weights have empty support");

    if (std::isinf(beta)) return beta > 0.0 ? x_max : x_min;
    if (beta == 0.0) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < w.size(); ++i)
            if (w[i] > 0.0) acc += w[i] * std::log(x[i]);
        return std::exp(acc);
    }
    // Scale by the extreme value so the powered ratios stay in [0, 1] or
    // [1, inf) without overflow.
    const double scale = beta > 0.0 ? x_max : x_min;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w[i] > 0.0) acc += w[i] * std::pow(x[i] / scale, beta);
    return scale * std::pow(acc, 1.0 / beta);
}

double gait_entropy(const SimilaritySpace& space, const DiscreteDistribution& p, double alpha) {
    check_match(space, p, "gait_entropy");
    if (!(alpha >= 0.0)) throw std::invalid_argument("gait_entropy: order must be >= 0");
    const Eigen::VectorXd profile = space.K * p.p;

    if (std::isinf(alpha)) {
        double worst = 0.0;
        for (Eigen::Index i = 0; i < p.p.size(); ++i)
            if (p.p[i] > kSupportThreshold) worst = std::max(worst, profile[i]);
        return -std::log(worst);
    }
    if (alpha == 1.0) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < p.p.size(); ++i)
            if (p.p[i] > kSupportThreshold) acc -= p.p[i] * std::log(profile[i]);
        return acc;
    }
    // H_alpha = log(sum_i p_i (Kp)_i^(alpha-1)) / (1 - alpha), over supp(p).
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.p.size(); ++i)
        if (p.p[i] > kSupportThreshold) acc += p.p[i] * std::pow(profile[i], alpha - 1.0);
    return std::log(acc) / (1.0 - alpha);
}

double diversity(const SimilaritySpace& space, const DiscreteDistribution& p, double alpha) {
    return std::exp(gait_entropy(space, p, alpha));
}

Eigen::VectorXd entropy_grad(const SimilaritySpace& space, const DiscreteDistribution& p) {
    check_match(space, p, "entropy_grad");
    if (p.p.minCoeff() <= 0.0)
        throw std::domain_error("entropy_grad: requires an interior distribution");
    const Eigen::VectorXd profile = space.K * p.p;
    return -profile.array().log().matrix() - space.K * (p.p.array() / profile.array()).matrix();
}

Eigen::MatrixXd neg_entropy_hessian(const SimilaritySpace& space, const DiscreteDistribution& p) {
    check_match(space, p, "neg_entropy_hessian");
    if (p.p.minCoeff() <= 0.0)
        throw std::domain_error("neg_entropy_hessian: requires an interior distribution");
    const Eigen::VectorXd profile = space.K * p.p;
    const Eigen::ArrayXd inv = 1.0 / profile.array();
    const Eigen::MatrixXd KD = space.K * inv.matrix().asDiagonal();  // K diag(1/Kp)
    const Eigen::ArrayXd mid = p.p.array() * inv * inv;              // p / (Kp)^2
    return KD.transpose() + KD - space.K * mid.matrix().asDiagonal() * space.K;
}

namespace detail {

Eigen::VectorXd entropy_grad_raw(const Eigen::MatrixXd& K, const Eigen::VectorXd& p) {
    Eigen::ArrayXd profile = (K * p).array();
    // Floor keeps boundary-adjacent iterates finite; the resulting large
    // ascent component points back into the simplex.
    profile = profile.max(std::numeric_limits<double>::min());
    return -profile.log().matrix() - K * (p.array() / profile).matrix();
}

double entropy_alpha1_raw(const Eigen::MatrixXd& K, const Eigen::VectorXd& p) {
    const Eigen::ArrayXd profile = (K * p).array();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] > kSupportThreshold) acc -= p[i] * std::log(profile[i]);
    return acc;
}

}  // namespace detail

}  // namespace gait
