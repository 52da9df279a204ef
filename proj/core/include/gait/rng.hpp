#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

// Deterministic random sampling built on std::mt19937_64 with hand-rolled
// distributions, so that sequences are bit-identical across platforms and
// standard library implementations.

namespace gait::rng {

using Engine = std::mt19937_64;

// SplitMix64 mix of (base, stream); used to derive independent per-trial
// seeds from one top-level seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Uniform on [0, 1) with 53-bit resolution.
double uniform01(Engine& eng);

double uniform(Engine& eng, double lo, double hi);

// Uniform integer in [lo, hi], inclusive.
int uniform_int(Engine& eng, int lo, int hi);

// Standard normal via Box-Muller.
double normal(Engine& eng);
double normal(Engine& eng, double mean, double stddev);

// Unit-rate gamma via Marsaglia-Tsang squeeze (with the power boost for
// shape < 1).
double gamma(Engine& eng, double shape);

// Dirichlet draw as normalized unit-rate gamma variables.
Eigen::VectorXd dirichlet(Engine& eng, const Eigen::VectorXd& alpha);

}  // namespace gait::rng
