#include "gait/divergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gait {

namespace {

void check_simplex(const Eigen::VectorXd& w, const char* what) {
    if (w.size() < 1) throw std::invalid_argument(std::string(what) + ": empty weight vector");
    if (!w.allFinite() || w.minCoeff() < -kSimplexTolerance ||
        std::abs(w.sum() - 1.0) > kSimplexTolerance)
        throw std::invalid_argument(std::string(what) + ": weights are not on the simplex");
}

}  // namespace

double gait_divergence_shared(const SimilaritySpace& space, const DiscreteDistribution& p,
                              const DiscreteDistribution& q) {
    if (space.size() != p.size() || space.size() != q.size())
        throw std::invalid_argument("gait_divergence_shared: size mismatch");
    const Eigen::VectorXd kp = space.K * p.p;
    const Eigen::VectorXd kq = space.K * q.p;

    double term_log = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p.p[i] <= kSupportThreshold) continue;
        if (kq[i] <= 0.0) return std::numeric_limits<double>::infinity();
        term_log += p.p[i] * std::log(kp[i] / kq[i]);
    }
    double term_ratio = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        if (q.p[i] <= kSupportThreshold) continue;
        term_ratio += q.p[i] * kp[i] / kq[i];
    }
    return 1.0 + term_log - term_ratio;
}

DivergenceReport gait_divergence_empirical(const BlockGram& blocks, const Eigen::VectorXd& p,
                                           const Eigen::VectorXd& q) {
    if (blocks.n() != p.size() || blocks.m() != q.size())
        throw std::invalid_argument("gait_divergence_empirical: block/weight size mismatch");
    check_simplex(p, "gait_divergence_empirical");
    check_simplex(q, "gait_divergence_empirical");

    const Eigen::VectorXd own_p = blocks.K_xx * p;            // K_xx p
    const Eigen::VectorXd cross_p = blocks.K_xy * q;          // K_xy q
    const Eigen::VectorXd cross_q = blocks.K_xy.transpose() * p;  // K_yx p
    const Eigen::VectorXd own_q = blocks.K_yy * q;            // K_yy q

    DivergenceReport report;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] <= kSupportThreshold) continue;
        if (cross_p[i] <= 0.0) {
            // p puts mass where q is seen at similarity zero.
            report.infinite = true;
            report.value = std::numeric_limits<double>::infinity();
            return report;
        }
        report.term_log += p[i] * std::log(own_p[i] / cross_p[i]);
    }
    for (Eigen::Index j = 0; j < q.size(); ++j) {
        if (q[j] <= kSupportThreshold) continue;
        report.term_ratio += q[j] * cross_q[j] / own_q[j];
    }
    report.value = 1.0 + report.term_log - report.term_ratio;
    return report;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> divergence_grad_weights(const BlockGram& blocks,
                                                                    const Eigen::VectorXd& p,
                                                                    const Eigen::VectorXd& q) {
    if (blocks.n() != p.size() || blocks.m() != q.size())
        throw std::invalid_argument("divergence_grad_weights: block/weight size mismatch");
    const Eigen::ArrayXd own_p = (blocks.K_xx * p).array();
    const Eigen::ArrayXd cross_p = (blocks.K_xy * q).array();
    const Eigen::ArrayXd cross_q = (blocks.K_xy.transpose() * p).array();
    const Eigen::ArrayXd own_q = (blocks.K_yy * q).array();
    if ((cross_p <= 0.0).any())
        throw std::domain_error("divergence_grad_weights: zero similarity profile (infinite divergence)");

    // dD/dp = log(K_xx p / K_xy q) + K_xx (p/K_xx p) - K_xy (q/K_yy q)
    Eigen::VectorXd grad_p = (own_p / cross_p).log().matrix() +
                             blocks.K_xx * (p.array() / own_p).matrix() -
                             blocks.K_xy * (q.array() / own_q).matrix();
    // dD/dq = -K_yx (p/K_xy q) - K_yx p/K_yy q + K_yy (q K_yx p / (K_yy q)^2)
    Eigen::VectorXd grad_q =
        -(blocks.K_xy.transpose() * (p.array() / cross_p).matrix()) -
        (cross_q / own_q).matrix() +
        blocks.K_yy * (q.array() * cross_q / (own_q * own_q)).matrix();
    return {std::move(grad_p), std::move(grad_q)};
}

AtomGradients divergence_grad_atoms(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                    const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                                    const KernelSpec& spec) {
    if (x.rows() != p.size() || y.rows() != q.size() || x.cols() != y.cols())
        throw std::invalid_argument("divergence_grad_atoms: shape mismatch");
    const int n = static_cast<int>(x.rows());
    const int m = static_cast<int>(y.rows());
    const int d = static_cast<int>(x.cols());

    const BlockGram blocks = build_block_gram(x, y, spec);
    const Eigen::ArrayXd own_p = (blocks.K_xx * p).array();
    const Eigen::ArrayXd cross_p = (blocks.K_xy * q).array();
    const Eigen::ArrayXd cross_q = (blocks.K_xy.transpose() * p).array();
    const Eigen::ArrayXd own_q = (blocks.K_yy * q).array();
    if ((cross_p <= 0.0).any())
        throw std::domain_error("divergence_grad_atoms: zero similarity profile (infinite divergence)");

    AtomGradients out;
    out.x_grad = Eigen::MatrixXd::Zero(n, d);
    out.y_grad = Eigen::MatrixXd::Zero(m, d);
    bool degenerate = false;

    // x-x pairs: d/dx_k of <p, log K_xx p> contributes through both rows.
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            bool flag = false;
            const Eigen::VectorXd g = kernel_grad_x(x.row(k), x.row(i), spec, &flag);
            degenerate |= flag;
            out.x_grad.row(k) += p[k] * p[i] * (1.0 / own_p[k] + 1.0 / own_p[i]) * g.transpose();
        }
    }
    // x-y pairs: the log term sees K_xy q, the ratio term sees K_yx p.
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < m; ++j) {
            bool flag = false;
            const Eigen::VectorXd g = kernel_grad_x(x.row(k), y.row(j), spec, &flag);
            degenerate |= flag;
            out.x_grad.row(k) -= p[k] * q[j] * (1.0 / cross_p[k] + 1.0 / own_q[j]) * g.transpose();
            // Same pair seen from y_j (gradient flips sign with the argument).
            out.y_grad.row(j) += p[k] * q[j] * (1.0 / cross_p[k] + 1.0 / own_q[j]) * g.transpose();
        }
    }
    // y-y pairs: only the ratio denominator K_yy q moves.
    for (int l = 0; l < m; ++l) {
        for (int j = 0; j < m; ++j) {
            if (j == l) continue;
            bool flag = false;
            const Eigen::VectorXd g = kernel_grad_x(y.row(l), y.row(j), spec, &flag);
            degenerate |= flag;
            out.y_grad.row(l) += q[l] * q[j] *
                                 (cross_q[l] / (own_q[l] * own_q[l]) +
                                  cross_q[j] / (own_q[j] * own_q[j])) *
                                 g.transpose();
        }
    }
    out.degenerate = degenerate;
    return out;
}

std::pair<double, double> forward_backward(const BlockGram& blocks, const Eigen::VectorXd& p,
                                           const Eigen::VectorXd& q) {
    const DivergenceReport fwd = gait_divergence_empirical(blocks, p, q);
    const DivergenceReport bwd = gait_divergence_empirical(blocks.reversed(), q, p);
    return {fwd.value, bwd.value};
}

}  // namespace gait
