#include "r1nes/natural_gradient.hpp"

#include <cmath>

namespace r1nes {

Matrix fisher_exact(const RankOneGaussian& dist)
{
    if (dist.direction_norm_sq() <= 0.0)
        throw DegenerateDirectionError("Fisher matrix requires a nonzero direction");
    const Eigen::Index d = dist.dimension();
    const double r2 = dist.direction_norm_sq();
    const double p = 1.0 + r2;
    const Vector& u = dist.direction();

    Matrix f(d + 1, d + 1);
    f(0, 0) = 2.0 * static_cast<double>(d);
    f.block(1, 0, d, 1) = (2.0 / p) * u;
    f.block(0, 1, 1, d) = (2.0 / p) * u.transpose();
    f.block(1, 1, d, d) = (r2 / p) * Matrix::Identity(d, d) + ((1.0 - r2) / (p * p)) * (u * u.transpose());
    return f;
}

InverseFisher fisher_inverse(const RankOneGaussian& dist)
{
    if (dist.direction_norm_sq() <= 0.0)
        throw DegenerateDirectionError("inverse Fisher requires a nonzero direction");
    const double d = static_cast<double>(dist.dimension());
    const double r2 = dist.direction_norm_sq();
    const double r = std::sqrt(r2);
    return InverseFisher{
        (1.0 + r2) / (2.0 * r2 * (d - 1.0)),
        r2 / (1.0 + r2),
        -r,
        2.0 * (d - 1.0),
        2.0 + d * (r2 - 1.0),
        dist.unit_direction(),
    };
}

std::pair<double, Vector> InverseFisher::apply(double g_lambda, const Vector& g_u) const
{
    require_dimension(g_u.size(), v.size(), "InverseFisher::apply");
    const double vg = v.dot(g_u);
    const double out_lambda = scale * (top_left * g_lambda + cross_coeff * vg);
    Vector out_u = scale * (diag_coeff * g_u + (cross_coeff * g_lambda + outer_coeff * vg) * v);
    return {out_lambda, std::move(out_u)};
}

Matrix InverseFisher::assemble() const
{
    const Eigen::Index d = v.size();
    Matrix m(d + 1, d + 1);
    m(0, 0) = top_left;
    m.block(1, 0, d, 1) = cross_coeff * v;
    m.block(0, 1, 1, d) = cross_coeff * v.transpose();
    m.block(1, 1, d, d) = diag_coeff * Matrix::Identity(d, d) + outer_coeff * (v * v.transpose());
    return scale * m;
}

NaturalGradient natural_grad_sample(const RankOneGaussian& dist, const Vector& x)
{
    require_dimension(x.size(), dist.dimension(), "natural_grad_sample");
    const InverseFisher inv = fisher_inverse(dist);
    const double d = static_cast<double>(dist.dimension());
    const double r = dist.direction_norm();
    const double inv_var = std::exp(-2.0 * dist.log_scale());
    const double xx = x.squaredNorm();
    const double xv = x.dot(inv.v);

    NaturalGradient g;
    g.mean = x;
    g.log_scale = ((inv_var * xx - d) - (inv_var * xv * xv - 1.0)) / (2.0 * (d - 1.0));

    const PlainGradient plain = plain_grad(dist, x);
    g.direction = inv.apply(plain.log_scale, plain.direction).second;

    const double along = g.direction.dot(inv.v);
    g.log_length = along / r;
    g.unit_direction = (g.direction - along * inv.v) / r;
    return g;
}

Vector natural_direction_closed_form(const RankOneGaussian& dist, const Vector& x)
{
    require_dimension(x.size(), dist.dimension(), "natural_direction_closed_form");
    const double d = static_cast<double>(dist.dimension());
    const double r2 = dist.direction_norm_sq();
    const double r = std::sqrt(r2);
    const Vector v = dist.unit_direction();
    const double inv_var = std::exp(-2.0 * dist.log_scale());
    const double a = x.dot(v);
    const double along_v =
        inv_var / (2.0 * (d - 1.0) * r) * ((1.0 - d) * a * a + (1.0 + r2) * (a * a - x.squaredNorm()));
    return along_v * v + (inv_var * a / r) * x;
}

} // namespace r1nes
