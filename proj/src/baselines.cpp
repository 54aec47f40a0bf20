#include "r1nes/baselines.hpp"

#include <Eigen/Cholesky>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace r1nes {

namespace {

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

void check_finite(const std::vector<double>& fitness)
{
    for (std::size_t k = 0; k < fitness.size(); ++k) {
        if (!std::isfinite(fitness[k]))
            throw EvaluationError("objective returned a non-finite value for sample " + std::to_string(k));
    }
}

} // namespace

double FullGaussian::log_scale() const
{
    const double log_det = transform.partialPivLu().matrixLU().diagonal().array().abs().log().sum();
    return log_det / static_cast<double>(dimension());
}

DiagonalGaussian snes_initial_state(const OptimizerConfig& config, Eigen::Index dimension, Rng& rng)
{
    if (dimension < 2)
        throw DimensionError("SNES requires dimension >= 2");
    return {start_mean(config, dimension, rng), Vector::Constant(dimension, config.init_log_scale)};
}

FullGaussian xnes_initial_state(const OptimizerConfig& config, Eigen::Index dimension, Rng& rng)
{
    if (dimension < 2)
        throw DimensionError("xNES requires dimension >= 2");
    return {start_mean(config, dimension, rng),
            std::exp(config.init_log_scale) * Matrix::Identity(dimension, dimension)};
}

StepResult<DiagonalGaussian> snes_step(const DiagonalGaussian& state, const OptimizerConfig& config,
                                       Rng& rng, bench::Evaluator& evaluator)
{
    const int n = config.population_size;
    const Eigen::Index d = state.dimension();
    const Vector sigma = state.log_sigmas.array().exp();

    Matrix draws(d, n);
    for (int k = 0; k < n; ++k)
        rng.fill_normal(draws.col(k));

    std::vector<double> fitness(static_cast<std::size_t>(n));
    Vector point(d);
    for (int k = 0; k < n; ++k) {
        point = state.mean + sigma.cwiseProduct(draws.col(k));
        fitness[k] = evaluator(point);
    }
    check_finite(fitness);
    const std::vector<double> weights = shape_fitness(fitness, config.shaping);

    Vector grad_mean = Vector::Zero(d);
    Vector grad_log_sigma = Vector::Zero(d);
    for (int k = 0; k < n; ++k) {
        if (weights[k] == 0.0)
            continue;
        grad_mean += weights[k] * draws.col(k);
        grad_log_sigma += weights[k] * (draws.col(k).array().square() - 1.0).matrix();
    }

    DiagonalGaussian next{state.mean + config.eta_mean * sigma.cwiseProduct(grad_mean),
                          state.log_sigmas + 0.5 * config.eta_scale * grad_log_sigma};
    if (!next.mean.allFinite() || !next.log_sigmas.allFinite())
        throw NumericalError("SNES update produced a non-finite state");
    return {std::move(next), std::move(fitness)};
}

StepResult<FullGaussian> xnes_step(const FullGaussian& state, const OptimizerConfig& config, Rng& rng,
                                   bench::Evaluator& evaluator)
{
    const int n = config.population_size;
    const Eigen::Index d = state.dimension();

    Matrix draws(d, n);
    for (int k = 0; k < n; ++k)
        rng.fill_normal(draws.col(k));

    std::vector<double> fitness(static_cast<std::size_t>(n));
    Vector point(d);
    for (int k = 0; k < n; ++k) {
        point = state.mean + state.transform * draws.col(k);
        fitness[k] = evaluator(point);
    }
    check_finite(fitness);
    const std::vector<double> weights = shape_fitness(fitness, config.shaping);

    Vector grad_mean = Vector::Zero(d);
    Matrix grad_shape = Matrix::Zero(d, d);
    double weight_sum = 0.0;
    for (int k = 0; k < n; ++k) {
        if (weights[k] == 0.0)
            continue;
        grad_mean += weights[k] * draws.col(k);
        grad_shape.noalias() += weights[k] * draws.col(k) * draws.col(k).transpose();
        weight_sum += weights[k];
    }
    grad_shape.diagonal().array() -= weight_sum;

    const double grad_sigma = grad_shape.trace() / static_cast<double>(d);
    Matrix grad_b = grad_shape;
    grad_b.diagonal().array() -= grad_sigma;

    FullGaussian next;
    next.mean = state.mean + config.eta_mean * (state.transform * grad_mean);
    if (grad_sigma == 0.0 && grad_b.isZero(0.0)) {
        next.transform = state.transform;
    } else {
        const Matrix step = (0.5 * config.eta_direction * grad_b).exp();
        next.transform = std::exp(0.5 * config.eta_scale * grad_sigma) * (state.transform * step);
    }

    if (!next.mean.allFinite() || !next.transform.allFinite())
        throw NumericalError("xNES update produced a non-finite state");
    const Eigen::LLT<Matrix> chol(next.transform * next.transform.transpose());
    if (chol.info() != Eigen::Success)
        throw NumericalError("xNES covariance lost positive definiteness");
    return {std::move(next), std::move(fitness)};
}

} // namespace r1nes
