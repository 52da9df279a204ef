#include "gait/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "gait/threading.hpp"

namespace gait {

namespace {

double p_norm(const Eigen::VectorXd& v, double order) {
    if (order == 2.0) return v.norm();
    if (order == 1.0) return v.lpNorm<1>();
    if (std::isinf(order)) return v.lpNorm<Eigen::Infinity>();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]), order);
    return std::pow(acc, 1.0 / order);
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

void check_points(const Eigen::MatrixXd& points, const char* what) {
    if (points.rows() < 1 || points.cols() < 1)
        throw std::invalid_argument(std::string(what) + ": needs at least one point");
    if (!points.allFinite())
        throw std::invalid_argument(std::string(what) + ": non-finite coordinates");
}

}  // namespace

KernelSpec KernelSpec::rbf_sq(double sigma) {
    KernelSpec s;
    s.family = KernelFamily::rbf_sq;
    s.sigma = sigma;
    s.validate();
    return s;
}

KernelSpec KernelSpec::exp_metric(double sigma, double norm_order) {
    KernelSpec s;
    s.family = KernelFamily::exp_metric;
    s.sigma = sigma;
    s.norm_order = norm_order;
    s.validate();
    return s;
}

KernelSpec KernelSpec::polynomial(double exponent) {
    KernelSpec s;
    s.family = KernelFamily::polynomial;
    s.exponent = exponent;
    s.validate();
    return s;
}

void KernelSpec::validate() const {
    switch (family) {
        case KernelFamily::rbf_sq:
        case KernelFamily::exp_metric:
            if (!(sigma > 0.0)) throw std::invalid_argument("kernel: bandwidth must be positive");
            break;
        case KernelFamily::polynomial:
            if (!(exponent > 0.0)) throw std::invalid_argument("kernel: exponent must be positive");
            break;
    }
    if (family == KernelFamily::exp_metric && !(norm_order >= 1.0))
        throw std::invalid_argument("kernel: norm order must be >= 1");
}

double kernel_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const KernelSpec& spec) {
    const Eigen::VectorXd diff = x - y;
    switch (spec.family) {
        case KernelFamily::rbf_sq:
            return clamp01(std::exp(-diff.squaredNorm() / (2.0 * spec.sigma * spec.sigma)));
        case KernelFamily::exp_metric:
            return clamp01(std::exp(-p_norm(diff, spec.norm_order) / spec.sigma));
        case KernelFamily::polynomial:
            return clamp01(1.0 / (1.0 + std::pow(diff.norm(), spec.exponent)));
    }
    return 0.0;
}

SimilaritySpace build_gram(const Eigen::MatrixXd& points, const KernelSpec& spec) {
    spec.validate();
    check_points(points, "build_gram");
    const int n = static_cast<int>(points.rows());
    Eigen::MatrixXd K(n, n);
    // Fill the upper triangle column by column (contiguous writes), then
    // mirror for exact symmetry.
    threading::parallel_for(n, [&](long lo, long hi) {
        for (long j = lo; j < hi; ++j) {
            for (long i = 0; i < j; ++i)
                K(i, j) = kernel_eval(points.row(i), points.row(j), spec);
            K(j, j) = 1.0;
        }
    });
    K.triangularView<Eigen::StrictlyLower>() = K.transpose();
    return SimilaritySpace::from_points_internal(std::move(K));
}

BlockGram build_block_gram(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                           const KernelSpec& spec) {
    spec.validate();
    check_points(x, "build_block_gram");
    check_points(y, "build_block_gram");
    if (x.cols() != y.cols())
        throw std::invalid_argument("build_block_gram: point sets have different dimensions");
    BlockGram blocks;
    blocks.K_xx = build_gram(x, spec).K;
    blocks.K_yy = build_gram(y, spec).K;
    const int n = static_cast<int>(x.rows());
    const int m = static_cast<int>(y.rows());
    blocks.K_xy.resize(n, m);
    threading::parallel_for(m, [&](long lo, long hi) {
        for (long j = lo; j < hi; ++j)
            for (long i = 0; i < n; ++i)
                blocks.K_xy(i, j) = kernel_eval(x.row(i), y.row(j), spec);
    });
    return blocks;
}

Eigen::VectorXd kernel_grad_x(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                              const KernelSpec& spec, bool* degenerate) {
    spec.validate();
    if (degenerate) *degenerate = false;
    const Eigen::VectorXd diff = x - y;
    const double r = diff.norm();

    switch (spec.family) {
        case KernelFamily::rbf_sq: {
            const double s2 = spec.sigma * spec.sigma;
            return std::exp(-diff.squaredNorm() / (2.0 * s2)) * (-diff / s2);
        }
        case KernelFamily::exp_metric: {
            if (r == 0.0) {
                // Nonsmooth at coincident points; the zero subgradient keeps
                // optimizers running.
                if (degenerate) *degenerate = true;
                return Eigen::VectorXd::Zero(x.size());
            }
            const double order = spec.norm_order;
            const double dist = p_norm(diff, order);
            const double k = std::exp(-dist / spec.sigma);
            Eigen::VectorXd dnorm(x.size());
            if (order == 2.0) {
                dnorm = diff / dist;
            } else {
                for (Eigen::Index i = 0; i < diff.size(); ++i) {
                    const double a = std::abs(diff[i]);
                    dnorm[i] = (a == 0.0) ? 0.0
                                          : std::copysign(std::pow(a / dist, order - 1.0), diff[i]);
                }
            }
            return (-k / spec.sigma) * dnorm;
        }
        case KernelFamily::polynomial: {
            if (r == 0.0) {
                if (degenerate) *degenerate = true;
                return Eigen::VectorXd::Zero(x.size());
            }
            const double s = spec.exponent;
            const double denom = 1.0 + std::pow(r, s);
            // d/dx 1/(1+r^s) = -s r^(s-2) (x-y) / (1+r^s)^2
            return (-s * std::pow(r, s - 2.0) / (denom * denom)) * diff;
        }
    }
    return Eigen::VectorXd::Zero(x.size());
}

Eigen::MatrixXd gaussian_grid_factor(int d, double sigma) {
    if (d < 1) throw std::invalid_argument("gaussian_grid_factor: empty grid");
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_grid_factor: sigma must be positive");
    Eigen::MatrixXd G(d, d);
    const double denom = 2.0 * sigma * sigma;
    for (int i = 0; i < d; ++i) {
        G(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            // Grid coordinates normalized to [0, 1].
            const double delta = (d == 1) ? 0.0 : static_cast<double>(i - j) / (d - 1);
            const double v = std::exp(-delta * delta / denom);
            G(i, j) = v;
            G(j, i) = v;
        }
    }
    return G;
}

Eigen::MatrixXd conv_apply(const Eigen::MatrixXd& grid, double sigma) {
    if (grid.rows() != grid.cols()) throw std::invalid_argument("conv_apply: grid must be square");
    const int d = static_cast<int>(grid.rows());
    const Eigen::MatrixXd G = gaussian_grid_factor(d, sigma);
    // Row pass then column pass; G is symmetric so this is G * grid * G.
    return G * (grid * G);
}

Eigen::MatrixXd conv_apply(const GridMeasure& image, double sigma) {
    return conv_apply(image.intensity, sigma);
}

// --- SimilaritySpace / DiscreteDistribution / EmpiricalMeasure / GridMeasure ---

SimilaritySpace SimilaritySpace::from_matrix(Eigen::MatrixXd m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw std::invalid_argument("SimilaritySpace: matrix must be square and nonempty");
    if (!m.allFinite()) throw std::invalid_argument("SimilaritySpace: non-finite entries");
    const int n = static_cast<int>(m.rows());
    for (int i = 0; i < n; ++i) {
        if (std::abs(m(i, i) - 1.0) > 1e-12)
            throw std::invalid_argument("SimilaritySpace: diagonal entry differs from 1");
        for (int j = 0; j < i; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > 1e-12)
                throw std::invalid_argument("SimilaritySpace: matrix is not symmetric");
            if (m(i, j) < -1e-12 || m(i, j) > 1.0 + 1e-12)
                throw std::invalid_argument("SimilaritySpace: entry outside [0, 1]");
        }
    }
    // Enforce the invariants exactly after the tolerant checks.
    for (int i = 0; i < n; ++i) {
        m(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            const double v = clamp01(0.5 * (m(i, j) + m(j, i)));
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    SimilaritySpace space;
    space.K = std::move(m);
    space.provenance = Provenance::explicit_matrix;
    return space;
}

SimilaritySpace SimilaritySpace::identity(int n) {
    SimilaritySpace space;
    space.K = Eigen::MatrixXd::Identity(n, n);
    space.provenance = Provenance::explicit_matrix;
    return space;
}

SimilaritySpace SimilaritySpace::all_ones(int n) {
    SimilaritySpace space;
    space.K = Eigen::MatrixXd::Ones(n, n);
    space.provenance = Provenance::explicit_matrix;
    return space;
}

SimilaritySpace SimilaritySpace::from_points_internal(Eigen::MatrixXd m) {
    SimilaritySpace space;
    space.K = std::move(m);
    space.provenance = Provenance::from_points;
    return space;
}

DiscreteDistribution DiscreteDistribution::from_vector(Eigen::VectorXd w) {
    if (w.size() < 1) throw std::invalid_argument("DiscreteDistribution: empty vector");
    if (!w.allFinite()) throw std::invalid_argument("DiscreteDistribution: non-finite weights");
    if (w.minCoeff() < -kSimplexTolerance)
        throw std::invalid_argument("DiscreteDistribution: negative weight");
    if (std::abs(w.sum() - 1.0) > kSimplexTolerance)
        throw std::invalid_argument("DiscreteDistribution: weights do not sum to 1");
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w[i] < 0.0) w[i] = 0.0;
    DiscreteDistribution dist;
    dist.p = std::move(w);
    return dist;
}

DiscreteDistribution DiscreteDistribution::uniform(int n) {
    if (n < 1) throw std::invalid_argument("DiscreteDistribution: size must be positive");
    DiscreteDistribution dist;
    dist.p = Eigen::VectorXd::Constant(n, 1.0 / n);
    return dist;
}

EmpiricalMeasure EmpiricalMeasure::from_parts(Eigen::MatrixXd atoms, Eigen::VectorXd weights) {
    if (atoms.rows() != weights.size())
        throw std::invalid_argument("EmpiricalMeasure: atom/weight count mismatch");
    if (!atoms.allFinite()) throw std::invalid_argument("EmpiricalMeasure: non-finite atoms");
    DiscreteDistribution checked = DiscreteDistribution::from_vector(std::move(weights));
    EmpiricalMeasure measure;
    measure.atoms = std::move(atoms);
    measure.weights = std::move(checked.p);
    return measure;
}

EmpiricalMeasure EmpiricalMeasure::uniform_on(Eigen::MatrixXd atoms) {
    const int m = static_cast<int>(atoms.rows());
    return from_parts(std::move(atoms), Eigen::VectorXd::Constant(m, 1.0 / m));
}

GridMeasure GridMeasure::from_intensity(Eigen::MatrixXd raw) {
    if (raw.rows() != raw.cols() || raw.rows() < 1)
        throw std::invalid_argument("GridMeasure: grid must be square and nonempty");
    if (!raw.allFinite()) throw std::invalid_argument("GridMeasure: non-finite intensities");
    if (raw.minCoeff() < 0.0) throw std::invalid_argument("GridMeasure: negative intensity");
    const double mass = raw.sum();
    if (mass <= 0.0) throw std::invalid_argument("GridMeasure: zero total mass");
    GridMeasure g;
    g.intensity = raw / mass;
    return g;
}

}  // namespace gait
