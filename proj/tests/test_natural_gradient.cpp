#include "r1nes/natural_gradient.hpp"
#include "r1nes/validation.hpp"

#include <doctest.h>

#include <cmath>

using namespace r1nes;

namespace {

Vector vec(std::initializer_list<double> values)
{
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values)
        v[i++] = x;
    return v;
}

} // namespace

TEST_SUITE("natural_gradient") {

TEST_CASE("Fisher top-left entry is 2d")
{
    for (double r : {0.1, 1.0, 7.0}) {
        const RankOneGaussian dist(Vector::Zero(2), 0.4, vec({r, 0.0}));
        CHECK(fisher_exact(dist)(0, 0) == doctest::Approx(4.0));
    }
}

TEST_CASE("Fisher cross block at u = e1")
{
    const RankOneGaussian dist(Vector::Zero(3), -0.3, vec({1.0, 0.0, 0.0}));
    const Matrix f = fisher_exact(dist);
    CHECK(f(1, 0) == doctest::Approx(1.0));
    CHECK(f(2, 0) == 0.0);
    CHECK(f(3, 0) == 0.0);
    CHECK(f(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("inverse Fisher scale at d = 2, r = 1")
{
    const RankOneGaussian dist(Vector::Zero(2), 0.0, vec({0.0, 1.0}));
    const InverseFisher inv = fisher_inverse(dist);
    CHECK(inv.scale == doctest::Approx(1.0));
    CHECK(inv.top_left == doctest::Approx(0.5));
    CHECK(inv.cross_coeff == doctest::Approx(-1.0));
    CHECK(inv.diag_coeff == doctest::Approx(2.0));
    CHECK(inv.outer_coeff == doctest::Approx(2.0));
}

TEST_CASE("degenerate direction is rejected")
{
    const RankOneGaussian dist(Vector::Zero(3), 0.0, Vector::Zero(3));
    CHECK_THROWS_AS(fisher_exact(dist), DegenerateDirectionError);
    CHECK_THROWS_AS(fisher_inverse(dist), DegenerateDirectionError);
    CHECK_THROWS_AS(natural_grad_sample(dist, Vector::Ones(3)), DegenerateDirectionError);
}

TEST_CASE("F times its closed-form inverse is the identity")
{
    Rng rng(31);
    for (Eigen::Index d : {2, 3, 5, 9, 16}) {
        const RankOneGaussian dist = oracle::random_state(d, rng);
        const Matrix inv = fisher_inverse(dist).assemble();
        CHECK((inv - inv.transpose()).cwiseAbs().maxCoeff() < 1e-12 * inv.cwiseAbs().maxCoeff());
        const Matrix product = fisher_exact(dist) * inv;
        CHECK((product - Matrix::Identity(d + 1, d + 1)).cwiseAbs().maxCoeff() < 1e-9);
    }
    CHECK(oracle::check_fisher_inverse(32, 3).pass);
    CHECK(oracle::check_fisher_inverse(33, 4).pass);
}

TEST_CASE("Fisher is symmetric positive definite")
{
    Rng rng(34);
    for (Eigen::Index d : {2, 4, 6}) {
        const Matrix f = fisher_exact(oracle::random_state(d, rng));
        CHECK((f - f.transpose()).cwiseAbs().maxCoeff() <= 1e-15 * f.cwiseAbs().maxCoeff());
        CHECK(oracle::symmetric_eigenvalues(f).front() > 0.0);
    }
}

TEST_CASE("inverse Fisher apply agrees with the assembled matrix")
{
    Rng rng(35);
    const RankOneGaussian dist = oracle::random_state(6, rng);
    const InverseFisher inv = fisher_inverse(dist);
    Vector g(7);
    rng.fill_normal(g);
    const auto [g_lambda, g_u] = inv.apply(g[0], g.tail(6));
    Vector fast(7);
    fast << g_lambda, g_u;
    CHECK(oracle::relative_error(fast, inv.assemble() * g) < 1e-12);
}

TEST_CASE("natural lambda gradient vanishes when both bracketed terms do")
{
    // e^{-2 lambda} x^T x = d and e^{-2 lambda} (x^T v)^2 = 1.
    const double lambda = 0.25;
    const RankOneGaussian dist(Vector::Zero(3), lambda, vec({2.0, 0.0, 0.0}));
    const Vector x = std::exp(lambda) * vec({1.0, 1.0, -1.0});
    CHECK(natural_grad_sample(dist, x).log_scale == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("O(d) natural gradient matches the dense product at d = 5")
{
    Rng rng(36);
    const RankOneGaussian dist = oracle::random_state(5, rng);
    Vector x(5);
    rng.fill_normal(x);
    x *= dist.scale();
    const NaturalGradient ng = natural_grad_sample(dist, x);
    const PlainGradient pg = plain_grad(dist, x);
    Vector plain(6);
    plain << pg.log_scale, pg.direction;
    const Vector dense = oracle::dense_inverse(fisher_exact(dist)) * plain;
    Vector fast(6);
    fast << ng.log_scale, ng.direction;
    CHECK(oracle::relative_error(fast, dense) < 1e-10);
    CHECK((ng.mean - x).norm() == 0.0);
}

TEST_CASE("oracle suite checks")
{
    CHECK(oracle::check_natural_gradient_dense(37, 100).pass);
    CHECK(oracle::check_natural_lambda_closed_form(38, 100).pass);
    CHECK(oracle::check_natural_direction_closed_form(39, 100).pass);
}

TEST_CASE("unit-direction gradient is tangent to v")
{
    Rng rng(40);
    for (int k = 0; k < 50; ++k) {
        const RankOneGaussian dist = oracle::random_state(2 + k % 10, rng);
        Vector x(dist.dimension());
        rng.fill_normal(x);
        const NaturalGradient ng = natural_grad_sample(dist, x);
        CHECK(std::abs(ng.unit_direction.dot(dist.unit_direction())) <=
              1e-12 * std::max(1.0, ng.unit_direction.norm()));
    }
}

TEST_CASE("(c, v) gradients reproduce the u step to first order")
{
    Rng rng(41);
    const RankOneGaussian dist = oracle::random_state(6, rng);
    Vector x(6);
    rng.fill_normal(x);
    const NaturalGradient ng = natural_grad_sample(dist, x);
    const double c = dist.log_length();
    const Vector v = dist.unit_direction();

    auto gap = [&](double eps) {
        const Vector v_new = (v + eps * ng.unit_direction).normalized();
        const Vector via_cv = std::exp(c + eps * ng.log_length) * v_new;
        const Vector via_u = dist.direction() + eps * ng.direction;
        return (via_cv - via_u).norm();
    };
    const double coarse = gap(1e-3);
    const double fine = gap(1e-4);
    CHECK(fine < 1e-4 * dist.direction_norm());
    // Second-order remainder: a tenfold smaller step shrinks the gap about 100x.
    CHECK(coarse / fine == doctest::Approx(100.0).epsilon(0.1));
}

}
