#pragma once

#include <span>
#include <string>
#include <vector>

namespace r1nes {

enum class FitnessShaping { rank_utilities, raw };

std::string to_string(FitnessShaping shaping);
FitnessShaping parse_fitness_shaping(const std::string& name);

/// Maps raw fitness (higher is better) to per-sample weights.
///
/// rank_utilities: rank k = 1 for the best sample gets
/// max(0, log(n/2 + 1) - log k), normalized to sum 1, minus 1/n. Tied
/// samples share the mean utility of the ranks they span, so the result
/// depends on the ordering only and is exactly zero for an all-equal
/// population. raw: the values divided by n.
///
/// Throws EvaluationError naming the first NaN sample.
std::vector<double> shape_fitness(std::span<const double> raw, FitnessShaping shaping);

} // namespace r1nes
