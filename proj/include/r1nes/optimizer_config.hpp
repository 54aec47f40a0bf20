#pragma once

#include "r1nes/common.hpp"
#include "r1nes/fitness_shaping.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace r1nes {

enum class Algorithm { r1nes, snes, xnes };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& name);

struct OptimizerConfig {
    int population_size = 0;
    double eta_mean = 1.0;
    double eta_scale = 0.0;
    /// Direction u for R1-NES, shape matrix B for xNES; SNES ignores it.
    double eta_direction = 0.0;
    FitnessShaping shaping = FitnessShaping::rank_utilities;

    /// Unset: drawn uniformly from [-4, 4]^d.
    std::optional<Vector> init_mean;
    double init_log_scale = 0.0;
    double init_direction_scale = 1.0;

    std::int64_t max_evaluations = 0;
    /// Unset: the problem's own target.
    std::optional<double> target_fitness;
    /// Stop once the run counts as prematurely converged.
    bool stop_on_stall = false;

    /// R1-NES direction safeguards. The natural gradient on c = log ||u||
    /// grows like 1/||u||^2, so a single step near u = 0 can collapse or
    /// explode the direction. Each generation may change c by at most
    /// max_log_length_step, and ||u|| is kept at or above min_direction_norm
    /// (the covariance is then isotropic to within min_direction_norm^2).
    double max_log_length_step = 1.0;
    double min_direction_norm = 1e-4;

    /// n = 4 + floor(3 ln d), eta_mean = 1, budget 1e4 * d, and per algorithm:
    ///   r1nes: eta_scale = eta_direction = (9 + 3 ln d) / (5 d sqrt d)
    ///   snes:  eta_scale = (3 + ln d) / (5 sqrt d)
    ///   xnes:  eta_scale = eta_direction = (9 + 3 ln d) / (5 d sqrt d)
    static OptimizerConfig defaults(Algorithm algorithm, Eigen::Index dimension);

    /// Throws ConfigError when n < 2 or a learning rate lies outside (0, 1].
    void validate(Algorithm algorithm) const;
};

int default_population_size(Eigen::Index dimension);

/// Fitness values of one generation, in sample order, plus the new state.
template <typename State>
struct StepResult {
    State state;
    std::vector<double> fitness;
};

struct GenerationTrace {
    std::int64_t generation = 0;
    std::int64_t evaluations = 0;
    double best = 0.0;       ///< best fitness so far
    double population_min = 0.0;
    double population_max = 0.0;
    double lambda = 0.0;     ///< log scale (mean log-sigma for SNES, log|A|/d for xNES)
    double c = 0.0;          ///< log ||u||; NaN for the baselines
};

/// One JSON line with keys generation, evals, best, min, max, lambda, c.
std::string to_trace_line(const GenerationTrace& trace);

} // namespace r1nes
