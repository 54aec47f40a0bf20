#include "r1nes/run.hpp"

#include "r1nes/r1nes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace r1nes {

namespace {

double trace_lambda(const RankOneGaussian& s) { return s.log_scale(); }
double trace_lambda(const DiagonalGaussian& s) { return s.log_sigmas.mean(); }
double trace_lambda(const FullGaussian& s) { return s.log_scale(); }

double trace_c(const RankOneGaussian& s)
{
    return s.direction_norm_sq() > 0.0 ? s.log_length() : -std::numeric_limits<double>::infinity();
}
double trace_c(const DiagonalGaussian&) { return std::numeric_limits<double>::quiet_NaN(); }
double trace_c(const FullGaussian&) { return std::numeric_limits<double>::quiet_NaN(); }

auto step(const RankOneGaussian& s, const OptimizerConfig& c, Rng& rng, bench::Evaluator& e)
{
    return r1nes_step(s, c, rng, e);
}
auto step(const DiagonalGaussian& s, const OptimizerConfig& c, Rng& rng, bench::Evaluator& e)
{
    return snes_step(s, c, rng, e);
}
auto step(const FullGaussian& s, const OptimizerConfig& c, Rng& rng, bench::Evaluator& e)
{
    return xnes_step(s, c, rng, e);
}

template <typename State>
RunRecord drive(State state, RunRecord record, const bench::Problem& problem,
                const OptimizerConfig& config, Rng& rng, const TraceSink& sink)
{
    bench::Evaluator evaluator(problem);
    const double target = config.target_fitness.value_or(problem.target_fitness());
    const std::int64_t stall_window = stall_window_per_dim * problem.dimension();
    const std::int64_t n = config.population_size;

    double best = -std::numeric_limits<double>::infinity();
    double stall_mark = best;
    std::int64_t stall_mark_evals = 0;

    const auto start = std::chrono::steady_clock::now();
    std::int64_t generation = 0;
    while (evaluator.evaluations() + n <= config.max_evaluations) {
        const std::int64_t before = evaluator.evaluations();
        auto result = step(state, config, rng, evaluator);
        state = std::move(result.state);
        ++generation;

        const auto [lo, hi] = std::minmax_element(result.fitness.begin(), result.fitness.end());
        for (std::size_t k = 0; k < result.fitness.size(); ++k) {
            best = std::max(best, result.fitness[k]);
            if (!record.success && best >= target) {
                record.success = true;
                record.evaluations_to_target = before + static_cast<std::int64_t>(k) + 1;
            }
        }

        GenerationTrace t;
        t.generation = generation;
        t.evaluations = evaluator.evaluations();
        t.best = best;
        t.population_min = *lo;
        t.population_max = *hi;
        t.lambda = trace_lambda(state);
        t.c = trace_c(state);
        record.trace.push_back(t);
        if (sink)
            sink(t);

        if (record.success)
            break;
        if (best >= stall_mark + stall_improvement || stall_mark == -std::numeric_limits<double>::infinity()) {
            stall_mark = best;
            stall_mark_evals = evaluator.evaluations();
        } else if (evaluator.evaluations() - stall_mark_evals >= stall_window) {
            record.premature_convergence = true;
            if (config.stop_on_stall)
                break;
        }
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    record.evaluations = evaluator.evaluations();
    record.best_fitness = best;
    if (record.success)
        record.premature_convergence = false;
    record.final_state = std::move(state);
    record.seconds_per_evaluation =
        record.evaluations > 0 ? elapsed.count() / static_cast<double>(record.evaluations) : 0.0;
    return record;
}

} // namespace

RunRecord run(Algorithm algorithm, const bench::Problem& problem, const OptimizerConfig& config,
              std::uint64_t seed, const TraceSink& sink)
{
    config.validate(algorithm);
    RunRecord record;
    record.algorithm = algorithm;
    record.problem = problem.name();
    record.dimension = problem.dimension();
    record.seed = seed;

    Rng rng(seed);
    const Eigen::Index d = problem.dimension();
    switch (algorithm) {
    case Algorithm::r1nes:
        return drive(r1nes_initial_state(config, d, rng), std::move(record), problem, config, rng, sink);
    case Algorithm::snes:
        return drive(snes_initial_state(config, d, rng), std::move(record), problem, config, rng, sink);
    case Algorithm::xnes:
        return drive(xnes_initial_state(config, d, rng), std::move(record), problem, config, rng, sink);
    }
    return record;
}

RunRecord run_r1nes(const bench::Problem& problem, const OptimizerConfig& config, std::uint64_t seed,
                    const TraceSink& sink)
{
    return run(Algorithm::r1nes, problem, config, seed, sink);
}

} // namespace r1nes
