#pragma once

// Exact Fisher information of the rank-one Gaussian with respect to
// theta = (lambda, u_1, ..., u_d), its closed-form inverse, and the
// per-sample natural gradients used by the optimizer.

#include "r1nes/common.hpp"
#include "r1nes/rank_one_gaussian.hpp"

namespace r1nes {

/// Dense (d+1)x(d+1) Fisher matrix, ordered (lambda, u_1..u_d).
/// Validation only; throws DegenerateDirectionError when u = 0.
Matrix fisher_exact(const RankOneGaussian& dist);

/// Inverse Fisher in factored form:
///
///   scale * [[ top_left,         cross_coeff v^T                         ],
///            [ cross_coeff v,    diag_coeff I + outer_coeff v v^T       ]]
///
/// with scale = (1+r^2) / (2 r^2 (d-1)), top_left = r^2/(1+r^2),
/// cross_coeff = -r, diag_coeff = 2(d-1), outer_coeff = 2 + d(r^2-1).
struct InverseFisher {
    double scale;
    double top_left;
    double cross_coeff;
    double diag_coeff;
    double outer_coeff;
    Vector v;

    /// F^{-1} (g_lambda, g_u) in O(d).
    std::pair<double, Vector> apply(double g_lambda, const Vector& g_u) const;

    /// Dense assembly, O(d^2). Tests only.
    Matrix assemble() const;
};

InverseFisher fisher_inverse(const RankOneGaussian& dist);

/// Natural gradient of log p(x | theta) for one mean-centered sample.
struct NaturalGradient {
    Vector mean;            ///< with respect to mu; equals x
    double log_scale;       ///< with respect to lambda
    Vector direction;       ///< with respect to u
    double log_length;      ///< with respect to c = log ||u||
    Vector unit_direction;  ///< with respect to v = u/||u||; orthogonal to v
};

NaturalGradient natural_grad_sample(const RankOneGaussian& dist, const Vector& x);

/// Closed-form direction component: e^{-2 lambda} / (2 (d-1) r) *
/// [(1-d) a^2 + (1+r^2)(a^2 - x^T x)] v + e^{-2 lambda} a / r * x, a = x^T v.
/// Algebraically identical to the u-block of F^{-1} times the plain gradient.
Vector natural_direction_closed_form(const RankOneGaussian& dist, const Vector& x);

} // namespace r1nes
