#include "r1nes/fitness_shaping.hpp"

#include "r1nes/common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace r1nes {

std::string to_string(FitnessShaping shaping)
{
    return shaping == FitnessShaping::raw ? "raw" : "rank_utilities";
}

FitnessShaping parse_fitness_shaping(const std::string& name)
{
    if (name == "rank_utilities" || name == "rank")
        return FitnessShaping::rank_utilities;
    if (name == "raw")
        return FitnessShaping::raw;
    throw ConfigError("unknown fitness shaping '" + name + "'");
}

std::vector<double> shape_fitness(std::span<const double> raw, FitnessShaping shaping)
{
    const std::size_t n = raw.size();
    if (n < 2)
        throw ConfigError("fitness shaping needs at least two samples");
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(raw[i]))
            throw EvaluationError("fitness of sample " + std::to_string(i) + " is NaN");
    }

    std::vector<double> out(n);
    if (shaping == FitnessShaping::raw) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = raw[i] / static_cast<double>(n);
        return out;
    }

    std::vector<double> by_rank(n);
    const double top = std::log(static_cast<double>(n) / 2.0 + 1.0);
    for (std::size_t k = 0; k < n; ++k)
        by_rank[k] = std::max(0.0, top - std::log(static_cast<double>(k + 1)));
    const double total = std::accumulate(by_rank.begin(), by_rank.end(), 0.0);
    for (double& w : by_rank)
        w = w / total - 1.0 / static_cast<double>(n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return raw[a] > raw[b]; });

    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && raw[order[end]] == raw[order[start]])
            ++end;
        double shared = 0.0;
        for (std::size_t k = start; k < end; ++k)
            shared += by_rank[k];
        shared /= static_cast<double>(end - start);
        if (end - start == 1)
            shared = by_rank[start];
        else if (end - start == n)
            shared = 0.0;
        for (std::size_t k = start; k < end; ++k)
            out[order[k]] = shared;
        start = end;
    }
    return out;
}

} // namespace r1nes
