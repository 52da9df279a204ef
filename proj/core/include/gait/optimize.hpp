#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gait/kernels.hpp"
#include "gait/types.hpp"

// Adaptive-moment gradient engine and the four solvers built on it:
// maximum-entropy distributions, image barycenters, measure approximation
// and minibatch sampling. Simplex-valued parameters are always optimized
// through temperature-scaled logits, which keeps iterates interior.

namespace gait {

struct OptimizerConfig {
    double step_size = 0.1;
    double decay1 = 0.9;    // first-moment EMA
    double decay2 = 0.999;  // second-moment EMA
    double epsilon = 1e-8;
    bool max_correction = false;  // running-max second moment (AMSGrad)
    int steps = 1000;
    int batch_size = 0;  // 0 = no minibatching
    std::uint64_t seed = 0;
    double temperature = 1.0;  // logit scaling for simplex parameters

    void validate() const;
};

// Raised when an objective or gradient goes non-finite; carries the step.
struct numerical_error : std::runtime_error {
    numerical_error(const std::string& what, int step_index)
        : std::runtime_error(what), step(step_index) {}
    int step;
};

// One adaptive-moment parameter block. step() applies the bias-corrected
// update theta <- theta - lr * m_hat / (sqrt(v_hat) + eps) in place.
class AdamOptimizer {
  public:
    explicit AdamOptimizer(const OptimizerConfig& config, long dimension);

    void step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grad);

    int iterations() const { return t_; }

  private:
    double lr_, beta1_, beta2_, eps_;
    bool max_correction_;
    int t_ = 0;
    Eigen::ArrayXd m_, v_, v_max_;
};

Eigen::VectorXd softmax(const Eigen::VectorXd& logits, double temperature);

// Chain rule through the softmax: gradient w.r.t. logits of an objective
// with gradient grad_p at p = softmax(logits / T).
Eigen::VectorXd softmax_chain_grad(const Eigen::VectorXd& p, const Eigen::VectorXd& grad_p,
                                   double temperature);

struct SparsityPenalty {
    double weight = 0.01;          // lambda in lambda * sum q_i^rho
    double exponent = 0.75;        // rho in (0, 1]
    double prune_threshold = 0.01; // entries below are zeroed at the end

    void validate() const;
};

struct MaxentResult {
    DiscreteDistribution distribution;
    std::vector<double> entropy_trace;  // objective per step
};

// Gradient ascent on H_1 over the simplex. Logits start Normal(0, 4) under
// config.seed; stops early once the tangent gradient norm falls below 1e-6.
MaxentResult maxent_solve(const SimilaritySpace& space, const OptimizerConfig& config);

struct BarycenterResult {
    GridMeasure barycenter;
    std::vector<double> objective_trace;  // mean divergence per step
};

// argmin_q (1/n) sum_i D(P_i || q) over grid measures, with every Gram
// product applied by separable convolution. Minibatches over images when
// config.batch_size is set below the image count.
BarycenterResult barycenter_solve(const std::vector<GridMeasure>& images, double sigma,
                                  const OptimizerConfig& config);

enum class ApproxMode { locations, weights, both };

struct ApproxResult {
    EmpiricalMeasure measure;
    std::vector<double> objective_trace;
};

// Draws a fresh empirical minibatch of the requested size; seeds derive
// from the solver seed and step index.
using BatchSampler = std::function<EmpiricalMeasure(int batch, std::uint64_t seed)>;

// Minimizes D(target || q) in the atom locations and/or weights of q. When
// a sparsity penalty is given, weights below its threshold are zeroed and
// the rest renormalized after the final step.
ApproxResult approximate_measure(const EmpiricalMeasure& target, const EmpiricalMeasure& init,
                                 const KernelSpec& spec, ApproxMode mode,
                                 const std::optional<SparsityPenalty>& penalty,
                                 const OptimizerConfig& config);
ApproxResult approximate_measure(const BatchSampler& target, const EmpiricalMeasure& init,
                                 const KernelSpec& spec, ApproxMode mode,
                                 const std::optional<SparsityPenalty>& penalty,
                                 const OptimizerConfig& config);

// k atoms drawn i.i.d. by weight with uniform weights 1/k; deterministic
// under the seed.
EmpiricalMeasure minibatch_sample(const EmpiricalMeasure& source, int k, std::uint64_t seed);

}  // namespace gait
