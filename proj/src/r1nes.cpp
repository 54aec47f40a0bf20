#include "r1nes/r1nes.hpp"

#include "r1nes/natural_gradient.hpp"

#include <algorithm>
#include <cmath>

namespace r1nes {

namespace {

constexpr double min_direction_norm = 1e-150;

Vector start_mean(const OptimizerConfig& config, Eigen::Index dimension, Rng& rng)
{
    if (config.init_mean) {
        require_dimension(config.init_mean->size(), dimension, "init_mean");
        return *config.init_mean;
    }
    Vector mean(dimension);
    for (Eigen::Index i = 0; i < dimension; ++i)
        mean[i] = rng.uniform(-4.0, 4.0);
    return mean;
}

} // namespace

RankOneGaussian r1nes_initial_state(const OptimizerConfig& config, Eigen::Index dimension, Rng& rng)
{
    Vector mean = start_mean(config, dimension, rng);
    Vector direction(dimension);
    rng.fill_normal(direction);
    direction *= config.init_direction_scale / direction.norm();
    return RankOneGaussian(std::move(mean), config.init_log_scale, std::move(direction));
}

StepResult<RankOneGaussian> r1nes_step(const RankOneGaussian& state, const OptimizerConfig& config,
                                       Rng& rng, bench::Evaluator& evaluator)
{
    const int n = config.population_size;
    const Eigen::Index d = state.dimension();
    if (state.direction_norm() < min_direction_norm)
        throw DegenerateDirectionError("direction norm underflowed below 1e-150");

    std::vector<Sample> samples;
    samples.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        samples.push_back(sample(state, rng));

    std::vector<double> fitness(static_cast<std::size_t>(n));
    Vector point(d);
    for (int k = 0; k < n; ++k) {
        point = state.mean() + samples[k].x;
        fitness[k] = evaluator(point);
        if (!std::isfinite(fitness[k]))
            throw EvaluationError("objective returned a non-finite value for sample " + std::to_string(k));
    }
    const std::vector<double> weights = shape_fitness(fitness, config.shaping);

    Vector grad_mean = Vector::Zero(d);
    double grad_scale = 0.0;
    Vector grad_direction = Vector::Zero(d);
    double grad_length = 0.0;
    Vector grad_unit = Vector::Zero(d);
    for (int k = 0; k < n; ++k) {
        const double w = weights[k];
        if (w == 0.0)
            continue;
        const NaturalGradient g = natural_grad_sample(state, samples[k].x);
        grad_mean += w * g.mean;
        grad_scale += w * g.log_scale;
        grad_direction += w * g.direction;
        grad_length += w * g.log_length;
        grad_unit += w * g.unit_direction;
    }

    Vector mean = state.mean() + config.eta_mean * grad_mean;
    const double log_scale = state.log_scale() + config.eta_scale * grad_scale;

    const double length = state.log_length();
    const double lowest = std::max(length - config.max_log_length_step, std::log(config.min_direction_norm));
    const double highest = length + config.max_log_length_step;

    Vector direction;
    if (grad_length < 0.0) {
        const double next_length = std::clamp(length + config.eta_direction * grad_length, lowest, highest);
        Vector unit = state.unit_direction() + config.eta_direction * grad_unit;
        unit.normalize();
        direction = std::exp(next_length) * unit;
    } else {
        direction = state.direction() + config.eta_direction * grad_direction;
        const double norm = direction.norm();
        if (norm > 0.0 && std::isfinite(norm)) {
            const double next_length = std::log(norm);
            const double clamped = std::clamp(next_length, lowest, highest);
            if (clamped != next_length)
                direction *= std::exp(clamped) / norm;
        }
    }
    if (!direction.allFinite() || !mean.allFinite() || !std::isfinite(log_scale))
        throw NumericalError("R1-NES update produced a non-finite state");
    if (direction.norm() < min_direction_norm)
        throw DegenerateDirectionError("direction norm underflowed below 1e-150");

    return {RankOneGaussian(std::move(mean), log_scale, std::move(direction)), std::move(fitness)};
}

} // namespace r1nes
