#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gait/types.hpp"

// Empirical harness for the concavity conjecture: randomized searches for
// negative divergence values, negative tangent-space Hessian eigenvalues
// and concavity-segment violations, plus the analytic parallel-lines
// cross-check. Every summary is a pure function of (config, seed); any hit
// is dumped as a replayable full-precision record.

namespace gait {

struct SearchConfig {
    long trials = 100000;
    std::uint64_t seed = 0;
    int n_min = 2;   // support size bounds (hessian/segment searches)
    int n_max = 12;
    int d_min = 1;   // ambient dimension bounds (hessian/segment searches)
    int d_max = 6;
    std::string out_path;  // counterexample records as JSON lines; empty = skip

    void validate() const;
};

struct CounterexampleRecord {
    std::string check;  // which search produced it
    std::uint64_t seed = 0;
    long trial = 0;
    int n = 0;
    Eigen::MatrixXd K;
    Eigen::VectorXd p;
    Eigen::VectorXd q;  // empty for hessian records
    double value = 0.0;
};

struct DivergenceSearchSummary {
    long trials = 0;
    double min_value = 0.0;
    long violation_count = 0;  // values below -1e-9
    // Counts over fixed bins of the observed divergence values:
    // (-inf,0), [0,1e-6), [1e-6,1e-3), [1e-3,1e-2), [1e-2,1e-1), [1e-1,1), [1,inf)
    std::array<long, 7> histogram{};
    std::vector<CounterexampleRecord> counterexamples;
};

// Random search over the Gram/distribution sampling scheme
//   n ~ U{2..11}, gamma_ij ~ U{0..9}, L_ij = U(0,1)^gamma_ij,
//   K = min(1, I + L L^T / n) with the diagonal reset to 1,
//   p ~ Dirichlet(alpha), q ~ Dirichlet(beta), alpha_i, beta_i ~ U(0,10).
DivergenceSearchSummary random_search_divergence(const SearchConfig& config);

struct HessianSearchSummary {
    long trials = 0;
    double min_eigenvalue = 0.0;  // over tangent-space spectra of -grad^2 H
    long violation_count = 0;     // eigenvalues below -1e-8
    std::vector<CounterexampleRecord> counterexamples;
};

// Random points in R^d, kernel exp(-|x-y|_p) with random order p >= 1 and a
// random Dirichlet distribution; reports the minimum eigenvalue of the
// negative Hessian restricted to the zero-sum tangent subspace.
HessianSearchSummary hessian_spectrum_search(const SearchConfig& config);

// Max over the theta grid of H[(1-theta) q + theta p] minus the linear
// approximation at q. Positive values are concavity violations.
double concavity_segment_check(const SimilaritySpace& space, const DiscreteDistribution& p,
                               const DiscreteDistribution& q, const Eigen::VectorXd& thetas);

struct SegmentSearchSummary {
    long trials = 0;
    double max_violation = 0.0;
    long violation_count = 0;  // gaps above 1e-10
    std::vector<CounterexampleRecord> counterexamples;
};

// Randomized concavity-segment checks on kernel-built positive-definite
// spaces with Dirichlet endpoint pairs.
SegmentSearchSummary random_segment_search(const SearchConfig& config);

struct ParallelLinesRow {
    double phi = 0.0;
    double numeric = 0.0;
    double analytic = 0.0;  // phi^2 + 1 - exp(-phi^2)
    double abs_error = 0.0;
};

// Uniform N-atom discretizations of the segments {phi} x [0,1] and
// {0} x [0,1] under k = exp(-|.|^2), against the closed form.
std::vector<ParallelLinesRow> parallel_lines_check(const std::vector<double>& phis,
                                                   int discretization);

// JSON-lines persistence for counterexample records (full precision).
void write_records_jsonl(const std::string& path, const std::vector<CounterexampleRecord>& records);
std::vector<CounterexampleRecord> read_records_jsonl(const std::string& path);

// Recomputes the recorded check from the stored inputs; must reproduce
// record.value to 1e-15.
double replay_record(const CounterexampleRecord& record);

// Orthonormal basis of the zero-sum tangent subspace {v : sum v_i = 0},
// returned as an n x (n-1) matrix (Helmert construction).
Eigen::MatrixXd simplex_tangent_basis(int n);

}  // namespace gait
