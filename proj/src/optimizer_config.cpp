#include "r1nes/optimizer_config.hpp"

#include <json.hpp>

#include <cmath>

namespace r1nes {

std::string to_string(Algorithm algorithm)
{
    switch (algorithm) {
    case Algorithm::r1nes:
        return "r1nes";
    case Algorithm::snes:
        return "snes";
    case Algorithm::xnes:
        return "xnes";
    }
    return "unknown";
}

Algorithm parse_algorithm(const std::string& name)
{
    if (name == "r1nes")
        return Algorithm::r1nes;
    if (name == "snes")
        return Algorithm::snes;
    if (name == "xnes")
        return Algorithm::xnes;
    throw ConfigError("unknown algorithm '" + name + "' (expected r1nes, snes or xnes)");
}

int default_population_size(Eigen::Index dimension)
{
    return 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(dimension))));
}

OptimizerConfig OptimizerConfig::defaults(Algorithm algorithm, Eigen::Index dimension)
{
    const double d = static_cast<double>(dimension);
    OptimizerConfig config;
    config.population_size = default_population_size(dimension);
    config.eta_mean = 1.0;
    config.max_evaluations = static_cast<std::int64_t>(10000 * dimension);
    const double full_rate = (9.0 + 3.0 * std::log(d)) / (5.0 * d * std::sqrt(d));
    switch (algorithm) {
    case Algorithm::r1nes:
    case Algorithm::xnes:
        config.eta_scale = full_rate;
        config.eta_direction = full_rate;
        break;
    case Algorithm::snes:
        config.eta_scale = (3.0 + std::log(d)) / (5.0 * std::sqrt(d));
        config.eta_direction = full_rate;
        break;
    }
    return config;
}

void OptimizerConfig::validate(Algorithm algorithm) const
{
    if (population_size < 2)
        throw ConfigError("population_size must be >= 2, got " + std::to_string(population_size));
    auto check_rate = [](double rate, const char* name) {
        if (!(rate > 0.0 && rate <= 1.0))
            throw ConfigError(std::string(name) + " must lie in (0, 1], got " + std::to_string(rate));
    };
    check_rate(eta_mean, "eta_mean");
    check_rate(eta_scale, "eta_scale");
    if (algorithm != Algorithm::snes)
        check_rate(eta_direction, "eta_direction");
    if (!(init_direction_scale > 0.0))
        throw ConfigError("init_direction_scale must be positive");
    if (!(max_log_length_step > 0.0))
        throw ConfigError("max_log_length_step must be positive");
    if (!(min_direction_norm > 0.0))
        throw ConfigError("min_direction_norm must be positive");
    if (max_evaluations < 0)
        throw ConfigError("max_evaluations must be non-negative");
}

std::string to_trace_line(const GenerationTrace& trace)
{
    nlohmann::json j;
    j["generation"] = trace.generation;
    j["evals"] = trace.evaluations;
    j["best"] = trace.best;
    j["min"] = trace.population_min;
    j["max"] = trace.population_max;
    j["lambda"] = trace.lambda;
    if (std::isfinite(trace.c))
        j["c"] = trace.c;
    else
        j["c"] = nullptr;
    return j.dump();
}

} // namespace r1nes
