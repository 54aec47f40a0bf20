#pragma once

#include "r1nes/common.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace r1nes {

/// Seeded random stream. Each optimizer run owns one; streams are never shared.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    double normal();
    double uniform(double lo, double hi);
    void fill_normal(Eigen::Ref<Vector> out);

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent child seed from a parent seed and a label/index.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);

} // namespace r1nes
