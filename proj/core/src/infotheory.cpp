#include "gait/infotheory.hpp"

#include <cmath>
#include <stdexcept>

#include "gait/entropy.hpp"

namespace gait {

namespace {

void check_space(const SimilaritySpace& space, long size, const char* what) {
    if (space.size() != size)
        throw std::invalid_argument(std::string(what) + ": Gram size does not match the table");
}

double entropy_of(const Eigen::VectorXd& p, const SimilaritySpace& space) {
    return gait_entropy(space, DiscreteDistribution::from_vector(p), 1.0);
}

// -sum P .* log(M) over the support of P.
double neg_expected_log(const Eigen::MatrixXd& table, const Eigen::MatrixXd& profile) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < table.rows(); ++i)
        for (Eigen::Index j = 0; j < table.cols(); ++j)
            if (table(i, j) > kSupportThreshold) acc -= table(i, j) * std::log(profile(i, j));
    return acc;
}

}  // namespace

JointDistribution JointDistribution::make(Eigen::MatrixXd table, SimilaritySpace space_x,
                                          SimilaritySpace space_y) {
    if (!table.allFinite() || table.minCoeff() < 0.0)
        throw std::invalid_argument("JointDistribution: table entries must be nonnegative");
    if (std::abs(table.sum() - 1.0) > kSimplexTolerance)
        throw std::invalid_argument("JointDistribution: table mass differs from 1");
    check_space(space_x, table.rows(), "JointDistribution");
    check_space(space_y, table.cols(), "JointDistribution");
    return {std::move(table), std::move(space_x), std::move(space_y)};
}

TripleJointDistribution TripleJointDistribution::make(std::vector<Eigen::MatrixXd> table,
                                                      SimilaritySpace space_x,
                                                      SimilaritySpace space_y,
                                                      SimilaritySpace space_z) {
    if (table.empty()) throw std::invalid_argument("TripleJointDistribution: empty table");
    double mass = 0.0;
    for (const auto& slice : table) {
        if (slice.rows() != table.front().rows() || slice.cols() != table.front().cols())
            throw std::invalid_argument("TripleJointDistribution: ragged slices");
        if (!slice.allFinite() || slice.minCoeff() < 0.0)
            throw std::invalid_argument("TripleJointDistribution: entries must be nonnegative");
        mass += slice.sum();
    }
    if (std::abs(mass - 1.0) > kSimplexTolerance)
        throw std::invalid_argument("TripleJointDistribution: table mass differs from 1");
    check_space(space_x, table.front().rows(), "TripleJointDistribution");
    check_space(space_y, table.front().cols(), "TripleJointDistribution");
    check_space(space_z, static_cast<long>(table.size()), "TripleJointDistribution");
    return {std::move(table), std::move(space_x), std::move(space_y), std::move(space_z)};
}

double joint_entropy(const JointDistribution& j) {
    // (K (x) Lambda) vec(P) = vec(K P Lambda), Lambda symmetric.
    const Eigen::MatrixXd profile = j.space_x.K * j.table * j.space_y.K;
    return neg_expected_log(j.table, profile);
}

double conditional_entropy(const JointDistribution& j) {
    return joint_entropy(j) - entropy_of(j.marginal_y(), j.space_y);
}

double mutual_information(const JointDistribution& j) {
    return entropy_of(j.marginal_x(), j.space_x) + entropy_of(j.marginal_y(), j.space_y) -
           joint_entropy(j);
}

namespace {

// Marginal tables of the triple joint.
Eigen::MatrixXd marginal_xy(const TripleJointDistribution& j) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(j.table.front().rows(), j.table.front().cols());
    for (const auto& slice : j.table) out += slice;
    return out;
}

Eigen::MatrixXd marginal_xz(const TripleJointDistribution& j) {
    Eigen::MatrixXd out(j.table.front().rows(), j.table.size());
    for (std::size_t z = 0; z < j.table.size(); ++z) out.col(z) = j.table[z].rowwise().sum();
    return out;
}

Eigen::MatrixXd marginal_yz(const TripleJointDistribution& j) {
    Eigen::MatrixXd out(j.table.front().cols(), j.table.size());
    for (std::size_t z = 0; z < j.table.size(); ++z)
        out.col(z) = j.table[z].colwise().sum().transpose();
    return out;
}

Eigen::VectorXd marginal_z(const TripleJointDistribution& j) {
    Eigen::VectorXd out(j.table.size());
    for (std::size_t z = 0; z < j.table.size(); ++z) out[z] = j.table[z].sum();
    return out;
}

}  // namespace

double joint_entropy3(const TripleJointDistribution& j) {
    // Contract each axis with its Gram in turn; the tensor Gram is never
    // materialized.
    const std::size_t nz = j.table.size();
    std::vector<Eigen::MatrixXd> xy_applied(nz);
    for (std::size_t z = 0; z < nz; ++z)
        xy_applied[z] = j.space_x.K * j.table[z] * j.space_y.K;
    double acc = 0.0;
    for (std::size_t z = 0; z < nz; ++z) {
        Eigen::MatrixXd profile =
            Eigen::MatrixXd::Zero(j.table.front().rows(), j.table.front().cols());
        for (std::size_t w = 0; w < nz; ++w) profile += j.space_z.K(z, w) * xy_applied[w];
        for (Eigen::Index a = 0; a < profile.rows(); ++a)
            for (Eigen::Index b = 0; b < profile.cols(); ++b)
                if (j.table[z](a, b) > kSupportThreshold)
                    acc -= j.table[z](a, b) * std::log(profile(a, b));
    }
    return acc;
}

double conditional_mutual_information(const TripleJointDistribution& j) {
    // I[X;Y|Z] = H[X,Z] + H[Y,Z] - H[X,Y,Z] - H[Z] via the chain rule.
    const double h_xz =
        joint_entropy(JointDistribution::make(marginal_xz(j), j.space_x, j.space_z));
    const double h_yz =
        joint_entropy(JointDistribution::make(marginal_yz(j), j.space_y, j.space_z));
    const double h_z = entropy_of(marginal_z(j), j.space_z);
    return h_xz + h_yz - joint_entropy3(j) - h_z;
}

double mutual_information_x_yz(const TripleJointDistribution& j) {
    // H[X] + H[Y,Z] - H[X,Y,Z].
    Eigen::VectorXd px = marginal_xy(j).rowwise().sum();
    const double h_x = entropy_of(px, j.space_x);
    const double h_yz =
        joint_entropy(JointDistribution::make(marginal_yz(j), j.space_y, j.space_z));
    return h_x + h_yz - joint_entropy3(j);
}

DpiReport check_dpi(const TripleJointDistribution& chain, double tolerance) {
    // Markov X -> Y -> Z means P(x,y,z) P(y) = P(x,y) P(y,z).
    const Eigen::MatrixXd xy = marginal_xy(chain);
    const Eigen::MatrixXd yz = marginal_yz(chain);
    const Eigen::VectorXd py = xy.colwise().sum();
    for (std::size_t z = 0; z < chain.table.size(); ++z)
        for (Eigen::Index x = 0; x < xy.rows(); ++x)
            for (Eigen::Index y = 0; y < xy.cols(); ++y)
                if (std::abs(chain.table[z](x, y) * py[y] - xy(x, y) * yz(y, z)) > 1e-12)
                    throw std::invalid_argument("check_dpi: joint is not a Markov chain");

    DpiReport report;
    report.i_xz = mutual_information(
        JointDistribution::make(marginal_xz(chain), chain.space_x, chain.space_z));
    report.i_xy = mutual_information(JointDistribution::make(xy, chain.space_x, chain.space_y));

    // I[X;Z|Y]: swap the roles of Y and Z in the conditional-MI expansion.
    TripleJointDistribution swapped;
    swapped.space_x = chain.space_x;
    swapped.space_y = chain.space_z;
    swapped.space_z = chain.space_y;
    const Eigen::Index ny = chain.table.front().cols();
    const Eigen::Index nz = static_cast<Eigen::Index>(chain.table.size());
    swapped.table.assign(ny, Eigen::MatrixXd::Zero(xy.rows(), nz));
    for (Eigen::Index z = 0; z < nz; ++z)
        for (Eigen::Index x = 0; x < xy.rows(); ++x)
            for (Eigen::Index y = 0; y < ny; ++y) swapped.table[y](x, z) = chain.table[z](x, y);
    report.i_xz_given_y = conditional_mutual_information(swapped);

    report.slack = report.i_xy + report.i_xz_given_y - report.i_xz;
    report.pass = report.slack >= -tolerance;
    return report;
}

}  // namespace gait
