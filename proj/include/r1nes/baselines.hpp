#pragma once

// Reference strategies: separable NES (diagonal covariance, O(n d) per
// generation) and exponential NES (full covariance, O(d^3) per generation).

#include "r1nes/benchmarks.hpp"
#include "r1nes/optimizer_config.hpp"
#include "r1nes/rng.hpp"

namespace r1nes {

struct DiagonalGaussian {
    Vector mean;
    Vector log_sigmas;

    Eigen::Index dimension() const { return mean.size(); }
};

/// N(mean, A A^T).
struct FullGaussian {
    Vector mean;
    Matrix transform;

    Eigen::Index dimension() const { return mean.size(); }
    /// log |det A| / d.
    double log_scale() const;
};

DiagonalGaussian snes_initial_state(const OptimizerConfig& config, Eigen::Index dimension, Rng& rng);
FullGaussian xnes_initial_state(const OptimizerConfig& config, Eigen::Index dimension, Rng& rng);

/// mean += eta_mean * sigma .* sum_k w_k s_k
/// log_sigma += eta_scale / 2 * sum_k w_k (s_k^2 - 1)
StepResult<DiagonalGaussian> snes_step(const DiagonalGaussian& state, const OptimizerConfig& config,
                                       Rng& rng, bench::Evaluator& evaluator);

/// Plain xNES: with G = sum_k w_k (s_k s_k^T - I), G_sigma = tr(G)/d and
/// G_B = G - G_sigma I,
///   mean += eta_mean * A sum_k w_k s_k
///   A    <- A * exp(eta_scale/2 * G_sigma) * expm(eta_direction/2 * G_B).
/// Throws NumericalError if A A^T stops being positive definite.
StepResult<FullGaussian> xnes_step(const FullGaussian& state, const OptimizerConfig& config, Rng& rng,
                                   bench::Evaluator& evaluator);

} // namespace r1nes
