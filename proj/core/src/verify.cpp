#include "gait/verify.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gait/divergence.hpp"
#include "gait/entropy.hpp"
#include "gait/kernels.hpp"
#include "gait/rng.hpp"
#include "gait/threading.hpp"

namespace gait {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v[i] = arr[i].get<double>();
    return v;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    const std::size_t n = rows.size();
    const std::size_t m = n == 0 ? 0 : rows[0].size();
    Eigen::MatrixXd out(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) out(i, j) = rows[i][j].get<double>();
    return out;
}

// Gram draw from the randomized scheme: K = min(1, I + L L^T / n) with
// L_ij = U(0,1)^gamma_ij, gamma_ij ~ U{0..9}; diagonal reset to exactly 1.
Eigen::MatrixXd sample_search_gram(rng::Engine& eng, int n) {
    Eigen::MatrixXd L(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int gamma = rng::uniform_int(eng, 0, 9);
            L(i, j) = std::pow(rng::uniform01(eng), static_cast<double>(gamma));
        }
    Eigen::MatrixXd K = Eigen::MatrixXd::Identity(n, n) + (L * L.transpose()) / n;
    K = K.cwiseMin(1.0);
    for (int i = 0; i < n; ++i) K(i, i) = 1.0;
    return K;
}

Eigen::VectorXd sample_dirichlet_u10(rng::Engine& eng, int n) {
    Eigen::VectorXd alpha(n);
    for (int i = 0; i < n; ++i) alpha[i] = rng::uniform(eng, 0.0, 10.0);
    return rng::dirichlet(eng, alpha);
}

int histogram_bin(double value) {
    if (value < 0.0) return 0;
    if (value < 1e-6) return 1;
    if (value < 1e-3) return 2;
    if (value < 1e-2) return 3;
    if (value < 1e-1) return 4;
    if (value < 1.0) return 5;
    return 6;
}

}  // namespace

void SearchConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("search: trials must be >= 1");
    if (n_min < 2 || n_max < n_min) throw std::invalid_argument("search: bad size bounds");
    if (d_min < 1 || d_max < d_min) throw std::invalid_argument("search: bad dimension bounds");
}

Eigen::MatrixXd simplex_tangent_basis(int n) {
    if (n < 2) throw std::invalid_argument("simplex_tangent_basis: n must be >= 2");
    // Helmert columns: v_k = (1,...,1,-k,0,...,0) / sqrt(k(k+1)), zero-sum
    // and orthonormal.
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n - 1);
    for (int k = 1; k < n; ++k) {
        const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
        for (int i = 0; i < k; ++i) basis(i, k - 1) = 1.0 / norm;
        basis(k, k - 1) = -static_cast<double>(k) / norm;
    }
    return basis;
}

DivergenceSearchSummary random_search_divergence(const SearchConfig& config) {
    config.validate();
    const long trials = config.trials;
    std::vector<double> values(trials);

    threading::parallel_for(trials, [&](long lo, long hi) {
        for (long t = lo; t < hi; ++t) {
            rng::Engine eng(rng::derive_seed(config.seed, static_cast<std::uint64_t>(t)));
            const int n = rng::uniform_int(eng, 2, 11);
            const Eigen::MatrixXd K = sample_search_gram(eng, n);
            const Eigen::VectorXd p = sample_dirichlet_u10(eng, n);
            const Eigen::VectorXd q = sample_dirichlet_u10(eng, n);
            const SimilaritySpace space = SimilaritySpace::from_matrix(K);
            values[t] = gait_divergence_shared(space, DiscreteDistribution::from_vector(p),
                                               DiscreteDistribution::from_vector(q));
        }
    });

    DivergenceSearchSummary summary;
    summary.trials = trials;
    summary.min_value = std::numeric_limits<double>::infinity();
    for (long t = 0; t < trials; ++t) {
        const double v = values[t];
        summary.min_value = std::min(summary.min_value, v);
        ++summary.histogram[histogram_bin(v)];
        if (v < -1e-9) {
            ++summary.violation_count;
            // Rebuild the instance for the record.
            rng::Engine eng(rng::derive_seed(config.seed, static_cast<std::uint64_t>(t)));
            const int n = rng::uniform_int(eng, 2, 11);
            CounterexampleRecord rec;
            rec.check = "divergence";
            rec.seed = config.seed;
            rec.trial = t;
            rec.n = n;
            rec.K = sample_search_gram(eng, n);
            rec.p = sample_dirichlet_u10(eng, n);
            rec.q = sample_dirichlet_u10(eng, n);
            rec.value = v;
            summary.counterexamples.push_back(std::move(rec));
        }
    }
    if (!config.out_path.empty() && !summary.counterexamples.empty())
        write_records_jsonl(config.out_path, summary.counterexamples);
    return summary;
}

HessianSearchSummary hessian_spectrum_search(const SearchConfig& config) {
    config.validate();
    const long trials = config.trials;
    std::vector<double> min_eigs(trials);

    threading::parallel_for(trials, [&](long lo, long hi) {
        for (long t = lo; t < hi; ++t) {
            rng::Engine eng(rng::derive_seed(config.seed ^ 0x68657373ULL,
                                             static_cast<std::uint64_t>(t)));
            const int n = rng::uniform_int(eng, config.n_min, config.n_max);
            const int d = rng::uniform_int(eng, config.d_min, config.d_max);
            Eigen::MatrixXd points(n, d);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) points(i, j) = rng::normal(eng);
            const double order = rng::uniform(eng, 1.0, 3.0);
            const SimilaritySpace space = build_gram(points, KernelSpec::exp_metric(1.0, order));

            Eigen::VectorXd p = sample_dirichlet_u10(eng, n);
            // The Hessian needs an interior distribution; nudge off the
            // boundary without leaving the simplex.
            p = (p.array() + 1e-12).matrix();
            p /= p.sum();

            const Eigen::MatrixXd hessian =
                neg_entropy_hessian(space, DiscreteDistribution::from_vector(p));
            const Eigen::MatrixXd basis = simplex_tangent_basis(n);
            const Eigen::MatrixXd reduced = basis.transpose() * hessian * basis;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced);
            min_eigs[t] = solver.eigenvalues().minCoeff();
        }
    });

    HessianSearchSummary summary;
    summary.trials = trials;
    summary.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (long t = 0; t < trials; ++t) {
        summary.min_eigenvalue = std::min(summary.min_eigenvalue, min_eigs[t]);
        if (min_eigs[t] < -1e-8) {
            ++summary.violation_count;
            rng::Engine eng(rng::derive_seed(config.seed ^ 0x68657373ULL,
                                             static_cast<std::uint64_t>(t)));
            const int n = rng::uniform_int(eng, config.n_min, config.n_max);
            const int d = rng::uniform_int(eng, config.d_min, config.d_max);
            Eigen::MatrixXd points(n, d);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) points(i, j) = rng::normal(eng);
            const double order = rng::uniform(eng, 1.0, 3.0);
            CounterexampleRecord rec;
            rec.check = "hessian";
            rec.seed = config.seed;
            rec.trial = t;
            rec.n = n;
            rec.K = build_gram(points, KernelSpec::exp_metric(1.0, order)).K;
            Eigen::VectorXd p = sample_dirichlet_u10(eng, n);
            p = (p.array() + 1e-12).matrix();
            p /= p.sum();
            rec.p = p;
            rec.value = min_eigs[t];
            summary.counterexamples.push_back(std::move(rec));
        }
    }
    if (!config.out_path.empty() && !summary.counterexamples.empty())
        write_records_jsonl(config.out_path, summary.counterexamples);
    return summary;
}

double concavity_segment_check(const SimilaritySpace& space, const DiscreteDistribution& p,
                               const DiscreteDistribution& q, const Eigen::VectorXd& thetas) {
    if (p.p.minCoeff() <= 0.0 || q.p.minCoeff() <= 0.0)
        throw std::domain_error("concavity_segment_check: endpoints must be interior");
    const double h_q = gait_entropy(space, q, 1.0);
    const Eigen::VectorXd grad_q = entropy_grad(space, q);
    const double slope = grad_q.dot(p.p - q.p);

    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < thetas.size(); ++i) {
        const double theta = thetas[i];
        if (theta < 0.0 || theta > 1.0)
            throw std::invalid_argument("concavity_segment_check: theta outside [0, 1]");
        const Eigen::VectorXd mix = (1.0 - theta) * q.p + theta * p.p;
        const double h_mix = detail::entropy_alpha1_raw(space.K, mix);
        worst = std::max(worst, h_mix - (h_q + theta * slope));
    }
    return worst;
}

SegmentSearchSummary random_segment_search(const SearchConfig& config) {
    config.validate();
    const long trials = config.trials;
    Eigen::VectorXd thetas = Eigen::VectorXd::LinSpaced(21, 0.0, 1.0);
    std::vector<double> gaps(trials);

    threading::parallel_for(trials, [&](long lo, long hi) {
        for (long t = lo; t < hi; ++t) {
            rng::Engine eng(rng::derive_seed(config.seed ^ 0x736567ULL,
                                             static_cast<std::uint64_t>(t)));
            const int n = rng::uniform_int(eng, config.n_min, config.n_max);
            const int d = rng::uniform_int(eng, config.d_min, config.d_max);
            Eigen::MatrixXd points(n, d);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) points(i, j) = rng::normal(eng);
            // Gaussian kernels give positive-definite Grams on distinct points.
            const SimilaritySpace space =
                build_gram(points, KernelSpec::rbf_sq(rng::uniform(eng, 0.5, 2.0)));
            Eigen::VectorXd p = sample_dirichlet_u10(eng, n);
            Eigen::VectorXd q = sample_dirichlet_u10(eng, n);
            p = (p.array() + 1e-12).matrix();
            p /= p.sum();
            q = (q.array() + 1e-12).matrix();
            q /= q.sum();
            gaps[t] = concavity_segment_check(space, DiscreteDistribution::from_vector(p),
                                              DiscreteDistribution::from_vector(q), thetas);
        }
    });

    SegmentSearchSummary summary;
    summary.trials = trials;
    summary.max_violation = -std::numeric_limits<double>::infinity();
    for (long t = 0; t < trials; ++t) {
        summary.max_violation = std::max(summary.max_violation, gaps[t]);
        if (gaps[t] > 1e-10) ++summary.violation_count;
    }
    return summary;
}

std::vector<ParallelLinesRow> parallel_lines_check(const std::vector<double>& phis,
                                                   int discretization) {
    if (discretization < 100)
        throw std::invalid_argument("parallel_lines_check: discretization must be >= 100");
    const int n = discretization;
    // Midpoint-rule atoms on the unit interval, shared by both segments.
    Eigen::VectorXd grid(n);
    for (int i = 0; i < n; ++i) grid[i] = (i + 0.5) / n;

    std::vector<ParallelLinesRow> rows;
    rows.reserve(phis.size());
    // k = exp(-|.|^2) is rbf_sq with 2 sigma^2 = 1.
    const KernelSpec spec = KernelSpec::rbf_sq(std::sqrt(0.5));
    const Eigen::VectorXd weights = Eigen::VectorXd::Constant(n, 1.0 / n);

    for (const double phi : phis) {
        Eigen::MatrixXd x(n, 2), y(n, 2);
        for (int i = 0; i < n; ++i) {
            x(i, 0) = phi;
            x(i, 1) = grid[i];
            y(i, 0) = 0.0;
            y(i, 1) = grid[i];
        }
        const BlockGram blocks = build_block_gram(x, y, spec);
        const DivergenceReport report = gait_divergence_empirical(blocks, weights, weights);
        ParallelLinesRow row;
        row.phi = phi;
        row.numeric = report.value;
        row.analytic = phi * phi + 1.0 - std::exp(-phi * phi);
        row.abs_error = std::abs(row.numeric - row.analytic);
        rows.push_back(row);
    }
    return rows;
}

void write_records_jsonl(const std::string& path,
                         const std::vector<CounterexampleRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open record file for writing: " + path);
    for (const auto& rec : records) {
        json obj;
        obj["check"] = rec.check;
        obj["seed"] = rec.seed;
        obj["trial"] = rec.trial;
        obj["n"] = rec.n;
        obj["K"] = matrix_to_json(rec.K);
        obj["p"] = vector_to_json(rec.p);
        if (rec.q.size() > 0) obj["q"] = vector_to_json(rec.q);
        obj["value"] = rec.value;
        out << obj.dump() << "\n";
    }
}

std::vector<CounterexampleRecord> read_records_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open record file: " + path);
    std::vector<CounterexampleRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json obj = json::parse(line);
        CounterexampleRecord rec;
        rec.check = obj.at("check").get<std::string>();
        rec.seed = obj.at("seed").get<std::uint64_t>();
        rec.trial = obj.at("trial").get<long>();
        rec.n = obj.at("n").get<int>();
        rec.K = matrix_from_json(obj.at("K"));
        rec.p = vector_from_json(obj.at("p"));
        if (obj.contains("q")) rec.q = vector_from_json(obj.at("q"));
        rec.value = obj.at("value").get<double>();
        records.push_back(std::move(rec));
    }
    return records;
}

double replay_record(const CounterexampleRecord& record) {
    const SimilaritySpace space = SimilaritySpace::from_matrix(record.K);
    if (record.check == "divergence") {
        return gait_divergence_shared(space, DiscreteDistribution::from_vector(record.p),
                                      DiscreteDistribution::from_vector(record.q));
    }
    if (record.check == "hessian") {
        const Eigen::MatrixXd hessian =
            neg_entropy_hessian(space, DiscreteDistribution::from_vector(record.p));
        const Eigen::MatrixXd basis = simplex_tangent_basis(record.n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(basis.transpose() * hessian * basis);
        return solver.eigenvalues().minCoeff();
    }
    throw std::invalid_argument("replay_record: unknown check '" + record.check + "'");
}

}  // namespace gait
