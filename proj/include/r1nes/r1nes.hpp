#pragma once

#include "r1nes/benchmarks.hpp"
#include "r1nes/optimizer_config.hpp"
#include "r1nes/rank_one_gaussian.hpp"
#include "r1nes/rng.hpp"

namespace r1nes {

/// Initial mean from the config (or the [-4, 4]^d start box), log scale from
/// the config, direction a random unit vector times init_direction_scale.
RankOneGaussian r1nes_initial_state(const OptimizerConfig& config, Eigen::Index dimension, Rng& rng);

/// One generation: sample n offsets, evaluate mu + x_i, shape, aggregate
/// the per-sample natural gradients and update (mu, lambda, u).
///
/// The direction is updated through (c, v) when the aggregated gradient on
/// c is negative, so a shrinking step can never flip u; otherwise u takes
/// the additive step. Throws DegenerateDirectionError when ||u|| falls
/// below 1e-150 and EvaluationError on a non-finite fitness.
StepResult<RankOneGaussian> r1nes_step(const RankOneGaussian& state, const OptimizerConfig& config,
                                       Rng& rng, bench::Evaluator& evaluator);

} // namespace r1nes
