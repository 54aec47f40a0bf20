#pragma once

#include "r1nes/baselines.hpp"
#include "r1nes/benchmarks.hpp"
#include "r1nes/optimizer_config.hpp"
#include "r1nes/rank_one_gaussian.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace r1nes {

using SearchState = std::variant<RankOneGaussian, DiagonalGaussian, FullGaussian>;

/// A run is prematurely converged when best fitness has not improved by at
/// least this much over stall_window_per_dim * d consecutive evaluations
/// while the target is still unmet.
inline constexpr double stall_improvement = 1e-12;
inline constexpr std::int64_t stall_window_per_dim = 100;

struct RunRecord {
    Algorithm algorithm = Algorithm::r1nes;
    std::string problem;
    Eigen::Index dimension = 0;
    std::uint64_t seed = 0;

    bool success = false;
    /// Evaluations consumed when the target was first reached; -1 if never.
    std::int64_t evaluations_to_target = -1;
    std::int64_t evaluations = 0;
    double best_fitness = 0.0;
    bool premature_convergence = false;
    /// Empty unless the run aborted (non-finite objective, degenerate state).
    std::string error;

    std::vector<GenerationTrace> trace;
    std::optional<SearchState> final_state;
    double seconds_per_evaluation = 0.0;
};

/// Invoked after every generation; used for trace streaming.
using TraceSink = std::function<void(const GenerationTrace&)>;

/// Iterates generations until best fitness >= target or the budget cannot
/// fit another generation. Errors from a step propagate.
RunRecord run(Algorithm algorithm, const bench::Problem& problem, const OptimizerConfig& config,
              std::uint64_t seed, const TraceSink& sink = {});

/// Same with the R1-NES optimizer.
RunRecord run_r1nes(const bench::Problem& problem, const OptimizerConfig& config, std::uint64_t seed,
                    const TraceSink& sink = {});

} // namespace r1nes
