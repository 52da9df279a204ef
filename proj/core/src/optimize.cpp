#include "gait/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gait/divergence.hpp"
#include "gait/entropy.hpp"
#include "gait/rng.hpp"

namespace gait {

void OptimizerConfig::validate() const {
    if (!(step_size > 0.0)) throw std::invalid_argument("optimizer: step size must be positive");
    if (decay1 < 0.0 || decay1 >= 1.0 || decay2 < 0.0 || decay2 >= 1.0)
        throw std::invalid_argument("optimizer: decay rates must lie in [0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("optimizer: epsilon must be positive");
    if (steps < 1) throw std::invalid_argument("optimizer: steps must be positive");
    if (batch_size < 0) throw std::invalid_argument("optimizer: batch size must be positive");
    if (!(temperature > 0.0)) throw std::invalid_argument("optimizer: temperature must be positive");
}

void SparsityPenalty::validate() const {
    if (weight < 0.0) throw std::invalid_argument("sparsity: weight must be nonnegative");
    if (!(exponent > 0.0) || exponent > 1.0)
        throw std::invalid_argument("sparsity: exponent must lie in (0, 1]");
    if (prune_threshold < 0.0)
        throw std::invalid_argument("sparsity: prune threshold must be nonnegative");
}

AdamOptimizer::AdamOptimizer(const OptimizerConfig& config, long dimension)
    : lr_(config.step_size),
      beta1_(config.decay1),
      beta2_(config.decay2),
      eps_(config.epsilon),
      max_correction_(config.max_correction),
      m_(Eigen::ArrayXd::Zero(dimension)),
      v_(Eigen::ArrayXd::Zero(dimension)),
      v_max_(Eigen::ArrayXd::Zero(dimension)) {
    config.validate();
}

void AdamOptimizer::step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grad) {
    if (params.size() != m_.size() || grad.size() != m_.size())
        throw std::invalid_argument("adam: parameter/gradient size mismatch");
    if (!grad.allFinite())
        throw numerical_error("adam: non-finite gradient", t_ + 1);
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * grad.array();
    v_ = beta2_ * v_ + (1.0 - beta2_) * grad.array().square();
    const double bias1 = 1.0 - std::pow(beta1_, t_);
    const double bias2 = 1.0 - std::pow(beta2_, t_);
    const Eigen::ArrayXd m_hat = m_ / bias1;
    Eigen::ArrayXd v_hat;
    if (max_correction_) {
        v_max_ = v_max_.max(v_);
        v_hat = v_max_ / bias2;
    } else {
        v_hat = v_ / bias2;
    }
    params.array() -= lr_ * m_hat / (v_hat.sqrt() + eps_);
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits, double temperature) {
    Eigen::ArrayXd scaled = logits.array() / temperature;
    scaled -= scaled.maxCoeff();
    Eigen::ArrayXd expd = scaled.exp();
    return (expd / expd.sum()).matrix();
}

Eigen::VectorXd softmax_chain_grad(const Eigen::VectorXd& p, const Eigen::VectorXd& grad_p,
                                   double temperature) {
    const double mean = p.dot(grad_p);
    return (p.array() * (grad_p.array() - mean) / temperature).matrix();
}

// --- maximum entropy ---

MaxentResult maxent_solve(const SimilaritySpace& space, const OptimizerConfig& config) {
    config.validate();
    const int n = space.size();
    rng::Engine eng(config.seed);
    Eigen::VectorXd logits(n);
    for (int i = 0; i < n; ++i) logits[i] = rng::normal(eng, 0.0, 2.0);  // variance 4

    AdamOptimizer adam(config, n);
    MaxentResult result;
    result.entropy_trace.reserve(config.steps);

    for (int step = 0; step < config.steps; ++step) {
        const Eigen::VectorXd p = softmax(logits, config.temperature);
        const double objective = detail::entropy_alpha1_raw(space.K, p);
        if (!std::isfinite(objective))
            throw numerical_error("maxent: non-finite entropy", step + 1);
        result.entropy_trace.push_back(objective);

        const Eigen::VectorXd grad_p = detail::entropy_grad_raw(space.K, p);
        const Eigen::VectorXd grad_logits = softmax_chain_grad(p, grad_p, config.temperature);
        if (grad_logits.norm() < 1e-6) break;  // stationary on the simplex
        // Ascent: feed the negated gradient to the minimizing update.
        adam.step(logits, -grad_logits);
    }
    result.distribution = DiscreteDistribution::from_vector(softmax(logits, config.temperature));
    return result;
}

// --- image barycenters ---

BarycenterResult barycenter_solve(const std::vector<GridMeasure>& images, double sigma,
                                  const OptimizerConfig& config) {
    config.validate();
    if (images.empty()) throw std::invalid_argument("barycenter: no input images");
    const int side = images.front().side();
    for (const auto& img : images)
        if (img.side() != side) throw std::invalid_argument("barycenter: mixed image sizes");
    const int pixels = side * side;

    // Per-image profiles K p_i are constant through the run.
    std::vector<Eigen::VectorXd> image_vecs, image_profiles;
    std::vector<double> image_log_terms;  // <p_i, log K p_i>
    image_vecs.reserve(images.size());
    image_profiles.reserve(images.size());
    for (const auto& img : images) {
        Eigen::VectorXd p = img.flattened();
        Eigen::MatrixXd kp = conv_apply(img.intensity, sigma);
        Eigen::VectorXd profile = Eigen::Map<Eigen::VectorXd>(kp.data(), kp.size());
        double log_term = 0.0;
        for (int i = 0; i < pixels; ++i)
            if (p[i] > kSupportThreshold) log_term += p[i] * std::log(profile[i]);
        image_vecs.push_back(std::move(p));
        image_profiles.push_back(std::move(profile));
        image_log_terms.push_back(log_term);
    }

    Eigen::VectorXd logits = Eigen::VectorXd::Zero(pixels);  // uniform grid start
    AdamOptimizer adam(config, pixels);
    rng::Engine batch_eng(rng::derive_seed(config.seed, 0x6261746368ULL));
    const int total = static_cast<int>(images.size());
    const bool minibatch = config.batch_size > 0 && config.batch_size < total;

    const auto as_grid = [side](const Eigen::VectorXd& v) {
        return Eigen::Map<const Eigen::MatrixXd>(v.data(), side, side);
    };

    BarycenterResult result;
    result.objective_trace.reserve(config.steps);
    std::vector<int> batch(total);
    std::iota(batch.begin(), batch.end(), 0);

    for (int step = 0; step < config.steps; ++step) {
        std::vector<int> active = batch;
        if (minibatch) {
            // Partial Fisher-Yates draw without replacement.
            for (int i = 0; i < config.batch_size; ++i) {
                const int j = i + rng::uniform_int(batch_eng, 0, total - 1 - i);
                std::swap(active[i], active[j]);
            }
            active.resize(config.batch_size);
        }

        const Eigen::VectorXd q = softmax(logits, config.temperature);
        Eigen::MatrixXd kq_grid = conv_apply(as_grid(q), sigma);
        Eigen::ArrayXd kq = Eigen::Map<Eigen::VectorXd>(kq_grid.data(), pixels).array();
        kq = kq.max(std::numeric_limits<double>::min());

        double objective = 0.0;
        Eigen::VectorXd grad_q = Eigen::VectorXd::Zero(pixels);
        for (const int idx : active) {
            const Eigen::VectorXd& p = image_vecs[idx];
            const Eigen::ArrayXd& kp = image_profiles[idx].array();

            double cross_log = 0.0;
            for (int i = 0; i < pixels; ++i)
                if (p[i] > kSupportThreshold) cross_log += p[i] * std::log(kq[i]);
            const double ratio = (q.array() * kp / kq).sum();
            objective += 1.0 + image_log_terms[idx] - cross_log - ratio;

            // dD/dq = -K(p/Kq) - Kp/Kq + K(q Kp / Kq^2)
            Eigen::VectorXd a = (p.array() / kq).matrix();
            Eigen::VectorXd b = (q.array() * kp / (kq * kq)).matrix();
            Eigen::MatrixXd ka = conv_apply(as_grid(a), sigma);
            Eigen::MatrixXd kb = conv_apply(as_grid(b), sigma);
            grad_q -= Eigen::Map<Eigen::VectorXd>(ka.data(), pixels);
            grad_q -= (kp / kq).matrix();
            grad_q += Eigen::Map<Eigen::VectorXd>(kb.data(), pixels);
        }
        const double scale = 1.0 / static_cast<double>(active.size());
        objective *= scale;
        grad_q *= scale;
        if (!std::isfinite(objective))
            throw numerical_error("barycenter: non-finite objective", step + 1);
        result.objective_trace.push_back(objective);

        adam.step(logits, softmax_chain_grad(q, grad_q, config.temperature));
    }

    const Eigen::VectorXd q = softmax(logits, config.temperature);
    GridMeasure out;
    out.intensity = Eigen::Map<const Eigen::MatrixXd>(q.data(), side, side);
    result.barycenter = std::move(out);
    return result;
}

// --- measure approximation ---

EmpiricalMeasure minibatch_sample(const EmpiricalMeasure& source, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("minibatch_sample: k must be >= 1");
    rng::Engine eng(seed);
    // Inverse-CDF draws by weight.
    Eigen::VectorXd cdf(source.count());
    double acc = 0.0;
    for (int i = 0; i < source.count(); ++i) {
        acc += source.weights[i];
        cdf[i] = acc;
    }
    Eigen::MatrixXd atoms(k, source.dim());
    for (int s = 0; s < k; ++s) {
        const double u = rng::uniform01(eng) * acc;
        int lo = 0, hi = source.count() - 1;
        while (lo < hi) {
            const int mid = (lo + hi) / 2;
            if (cdf[mid] < u)
                lo = mid + 1;
            else
                hi = mid;
        }
        atoms.row(s) = source.atoms.row(lo);
    }
    return EmpiricalMeasure::uniform_on(std::move(atoms));
}

namespace {

struct ApproxProblem {
    std::function<EmpiricalMeasure(int step)> next_batch;
    bool static_batch = false;  // the batch is the same full target every step
};

ApproxResult approximate_measure_impl(const ApproxProblem& problem, const EmpiricalMeasure& init,
                                      const KernelSpec& spec, ApproxMode mode,
                                      const std::optional<SparsityPenalty>& penalty,
                                      const OptimizerConfig& config) {
    config.validate();
    spec.validate();
    if (penalty) penalty->validate();
    const int m = init.count();
    const int d = init.dim();
    const bool move_atoms = mode == ApproxMode::locations || mode == ApproxMode::both;
    const bool move_weights = mode == ApproxMode::weights || mode == ApproxMode::both;

    Eigen::MatrixXd atoms = init.atoms;
    // Weight logits start at the exact logit image of the initial weights so
    // a weights-mode run continues from init rather than from uniform.
    Eigen::VectorXd logits(m);
    if (move_weights) {
        for (int i = 0; i < m; ++i)
            logits[i] = config.temperature *
                        std::log(std::max(init.weights[i], std::numeric_limits<double>::min()));
    }
    Eigen::VectorXd weights = init.weights;

    // One optimizer state per parameter block, both stepped every iteration.
    AdamOptimizer adam_atoms(config, move_atoms ? static_cast<long>(m) * d : 1);
    AdamOptimizer adam_logits(config, move_weights ? m : 1);

    ApproxResult result;
    result.objective_trace.reserve(config.steps);

    // With fixed atoms and a fixed full-target batch the blocks never change.
    std::optional<BlockGram> cached_blocks;
    const bool can_cache = !move_atoms && problem.static_batch;

    for (int step = 0; step < config.steps; ++step) {
        const EmpiricalMeasure batch = problem.next_batch(step);
        if (move_weights) weights = softmax(logits, config.temperature);

        BlockGram fresh_blocks;
        if (can_cache) {
            if (!cached_blocks) cached_blocks = build_block_gram(batch.atoms, atoms, spec);
        } else {
            fresh_blocks = build_block_gram(batch.atoms, atoms, spec);
        }
        const BlockGram& blocks = can_cache ? *cached_blocks : fresh_blocks;
        const DivergenceReport report = gait_divergence_empirical(blocks, batch.weights, weights);
        double objective = report.value;
        if (penalty && penalty->weight > 0.0)
            objective += penalty->weight * weights.array().pow(penalty->exponent).sum();
        if (!std::isfinite(objective))
            throw numerical_error("approximate_measure: non-finite objective", step + 1);
        result.objective_trace.push_back(objective);

        double grad_norm_sq = 0.0;
        AtomGradients atom_grads;
        Eigen::VectorXd logit_grad;
        if (move_atoms) {
            atom_grads = divergence_grad_atoms(batch.atoms, atoms, batch.weights, weights, spec);
            grad_norm_sq += atom_grads.y_grad.squaredNorm();
        }
        if (move_weights) {
            Eigen::VectorXd grad_w = divergence_grad_weights(blocks, batch.weights, weights).second;
            if (penalty && penalty->weight > 0.0) {
                // d/dq lambda q^rho = lambda rho q^(rho-1); floor q to keep
                // the fractional power finite near the boundary.
                const Eigen::ArrayXd floored = weights.array().max(1e-30);
                grad_w.array() +=
                    penalty->weight * penalty->exponent * floored.pow(penalty->exponent - 1.0);
            }
            logit_grad = softmax_chain_grad(weights, grad_w, config.temperature);
            grad_norm_sq += logit_grad.squaredNorm();
        }
        // Stationary point (e.g. the target itself): stepping would only let
        // the epsilon floor wander the parameters around it.
        if (grad_norm_sq < 1e-24) break;

        if (move_atoms) {
            Eigen::VectorXd flat =
                Eigen::Map<Eigen::VectorXd>(atoms.data(), static_cast<long>(m) * d);
            const Eigen::VectorXd gflat = Eigen::Map<const Eigen::VectorXd>(
                atom_grads.y_grad.data(), static_cast<long>(m) * d);
            adam_atoms.step(flat, gflat);
            atoms = Eigen::Map<Eigen::MatrixXd>(flat.data(), m, d);
        }
        if (move_weights) adam_logits.step(logits, logit_grad);
    }

    if (move_weights) weights = softmax(logits, config.temperature);
    if (penalty) {
        Eigen::VectorXd pruned = weights;
        for (int i = 0; i < m; ++i)
            if (pruned[i] < penalty->prune_threshold) pruned[i] = 0.0;
        const double kept = pruned.sum();
        if (kept <= 0.0)
            throw std::runtime_error("approximate_measure: prune threshold removes entire support");
        weights = pruned / kept;
    }
    result.measure = EmpiricalMeasure::from_parts(std::move(atoms), std::move(weights));
    return result;
}

}  // namespace

ApproxResult approximate_measure(const EmpiricalMeasure& target, const EmpiricalMeasure& init,
                                 const KernelSpec& spec, ApproxMode mode,
                                 const std::optional<SparsityPenalty>& penalty,
                                 const OptimizerConfig& config) {
    if (target.dim() != init.dim())
        throw std::invalid_argument("approximate_measure: target/init dimension mismatch");
    ApproxProblem problem;
    if (config.batch_size > 0 && config.batch_size < target.count()) {
        const std::uint64_t seed = config.seed;
        const int k = config.batch_size;
        problem.next_batch = [&target, seed, k](int step) {
            return minibatch_sample(target, k, rng::derive_seed(seed, step));
        };
    } else {
        problem.next_batch = [&target](int) { return target; };
        problem.static_batch = true;
    }
    return approximate_measure_impl(problem, init, spec, mode, penalty, config);
}

ApproxResult approximate_measure(const BatchSampler& target, const EmpiricalMeasure& init,
                                 const KernelSpec& spec, ApproxMode mode,
                                 const std::optional<SparsityPenalty>& penalty,
                                 const OptimizerConfig& config) {
    if (!target) throw std::invalid_argument("approximate_measure: null sampler");
    if (config.batch_size < 1)
        throw std::invalid_argument("approximate_measure: sampler targets need a batch size");
    ApproxProblem problem;
    const std::uint64_t seed = config.seed;
    const int k = config.batch_size;
    problem.next_batch = [&target, seed, k](int step) {
        return target(k, rng::derive_seed(seed, step));
    };
    return approximate_measure_impl(problem, init, spec, mode, penalty, config);
}

}  // namespace gait
