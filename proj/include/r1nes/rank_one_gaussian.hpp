#pragma once

// Gaussian search distribution N(mu, C) with C = exp(2*lambda) * (I + u u^T).
//
// Everything here is O(d): the covariance is never formed. Offsets x are
// always relative to the mean, so the density and gradient routines take
// mean-centered points.

#include "r1nes/common.hpp"
#include "r1nes/rng.hpp"

#include <cstdint>
#include <string>

namespace r1nes {

class RankOneGaussian {
public:
    /// Throws DimensionError when sizes differ or d < 2, Error on non-finite input.
    RankOneGaussian(Vector mean, double log_scale, Vector direction);

    Eigen::Index dimension() const { return mean_.size(); }

    const Vector& mean() const { return mean_; }
    /// lambda; the isotropic standard deviation is exp(lambda).
    double log_scale() const { return log_scale_; }
    double scale() const;
    /// u, the unnormalized predominant direction.
    const Vector& direction() const { return direction_; }

    double direction_norm_sq() const { return norm_sq_; }
    double direction_norm() const;
    /// c = log ||u||. Throws DegenerateDirectionError when u = 0.
    double log_length() const;
    /// v = u / ||u||. Throws DegenerateDirectionError when u = 0.
    Vector unit_direction() const;

    RankOneGaussian with_mean(Vector mean) const;

private:
    Vector mean_;
    double log_scale_;
    Vector direction_;
    double norm_sq_;
};

struct Sample {
    Vector y;   ///< isotropic draw
    double z;   ///< draw along the direction
    Vector x;   ///< offset from the mean
    double fitness = 0.0;
};

/// x = exp(lambda) * (y + z u) for the given draws.
Sample make_sample(const RankOneGaussian& dist, Vector y, double z);
Sample sample(const RankOneGaussian& dist, Rng& rng);

/// C^{-1} w via the Sherman-Morrison form.
Vector apply_inverse_covariance(const RankOneGaussian& dist, const Vector& w);

/// log |C| = 2 d lambda + log(1 + r^2).
double log_det(const RankOneGaussian& dist);

/// Normalized log density of the mean-centered offset x.
double log_density(const RankOneGaussian& dist, const Vector& x);

struct PlainGradient {
    double log_scale;
    Vector direction;
};

/// Vanilla score: gradient of log_density with respect to (lambda, u).
PlainGradient plain_grad(const RankOneGaussian& dist, const Vector& x);

/// Checkpoint record: distribution state plus the stream seed and epoch
/// (generation counter) it was captured at.
struct Checkpoint {
    RankOneGaussian state;
    std::uint64_t seed = 0;
    std::uint64_t epoch = 0;
};

/// Single-line JSON with fields mu, lambda, u, seed, epoch. Reals round-trip exactly.
std::string to_record(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_record(const std::string& line);

} // namespace r1nes
