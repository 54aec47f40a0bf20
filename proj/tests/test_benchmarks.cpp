#include "r1nes/benchmarks.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <set>

using namespace r1nes;
using namespace r1nes::bench;

namespace {

double evaluate(const Problem& p, const Vector& x)
{
    Evaluator e(p);
    return e(x);
}

Problem untransformed(const std::string& name, Function cost, Eigen::Index d, Vector optimum)
{
    return Problem(name, d, std::move(cost), std::move(optimum), std::nullopt, 0.0, true, 0);
}

/// Minimizes along coordinate i exactly, assuming the cost is quadratic along it.
void line_minimize(const Problem& p, Vector& x, Eigen::Index i)
{
    const double h = 1.0;
    const double f0 = -evaluate(p, x);
    x[i] += h;
    const double fp = -evaluate(p, x);
    x[i] -= 2.0 * h;
    const double fm = -evaluate(p, x);
    x[i] += h;
    const double curvature = (fp - 2.0 * f0 + fm) / (h * h);
    if (curvature > 0.0)
        x[i] -= (fp - fm) / (2.0 * h) / curvature;
}

} // namespace

TEST_SUITE("benchmarks") {

TEST_CASE("sphere without shift is zero at the origin")
{
    const Problem p = untransformed("sphere", raw::sphere, 5, Vector::Zero(5));
    CHECK(evaluate(p, Vector::Zero(5)) == 0.0);
}

TEST_CASE("cigar at the ones vector in d = 2")
{
    const Problem p = untransformed("cigar", raw::cigar, 2, Vector::Zero(2));
    CHECK(evaluate(p, Vector::Ones(2)) == -(1e6 + 1.0));
    // Long axis first: z1 is cheap, every other coordinate costs 1e6.
    CHECK(raw::cigar((Vector(3) << 1.0, 1.0, 1.0).finished()) == 1.0 + 2e6);
}

TEST_CASE("raw function values")
{
    CHECK(raw::rosenbrock(Vector::Ones(7)) == 0.0);
    CHECK(raw::rosenbrock(Vector::Zero(3)) == 2.0);
    CHECK(raw::ellipsoid(Vector::Ones(2)) == doctest::Approx(1.0 + 1e6));
    CHECK(raw::ellipsoid(Vector::Ones(3)) == doctest::Approx(1.0 + 1e3 + 1e6));
    CHECK(raw::tablet(Vector::Ones(3)) == doctest::Approx(1e6 + 2.0));
    CHECK(raw::sharp_ridge((Vector(3) << 2.0, 3.0, 4.0).finished()) == doctest::Approx(4.0 + 500.0));
    CHECK(raw::different_powers((Vector(2) << 2.0, 1.0).finished()) == doctest::Approx(std::sqrt(4.0 + 1.0)));
    CHECK(raw::attractive_sector((Vector(2) << 1.0, -1.0).finished(), Vector::Ones(2)) ==
          doctest::Approx(1e4 + 1.0));
    CHECK(raw::step_ellipsoid(Vector::Zero(4)) == 0.0);
    const Vector signs = (Vector(2) << 1.0, -1.0).finished();
    CHECK(raw::linear_slope(5.0 * signs, signs) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(raw::linear_slope(Vector::Zero(2), signs) == doctest::Approx(5.0 + 50.0));
    CHECK(raw::bent_cigar(Vector::Zero(3), Matrix()) == 0.0);
    for (const auto& z : {Vector(Vector::Ones(4)), Vector(Vector::Constant(4, -0.3))})
        CHECK(raw::sphere(z) >= 0.0);
}

TEST_CASE("every problem attains zero at its own optimum")
{
    for (Eigen::Index d : {2, 3, 10}) {
        for (const auto& name : all_function_names()) {
            const Problem p = make_problem(name, d, 17);
            INFO(name << " d=" << d);
            CHECK(evaluate(p, p.optimum()) == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
            CHECK(evaluate(p, p.optimum()) >= p.target_fitness());
        }
    }
}

TEST_CASE("nonzero f_opt offsets the optimum value")
{
    SuiteOptions options;
    options.nonzero_f_opt = true;
    const Problem p = make_problem("tablet", 4, 5, options);
    CHECK(p.f_opt() != 0.0);
    CHECK(evaluate(p, p.optimum()) == doctest::Approx(-p.f_opt()));
    CHECK(p.target_fitness() == -(p.f_opt() + 1e-8));
}

TEST_CASE("rotated sphere equals the unrotated sphere")
{
    Rng rng(5);
    const Eigen::Index d = 6;
    Transform rotated{random_rotation(d, rng), Vector::Zero(d)};
    rng.fill_normal(rotated.shift);
    const Transform plain{Matrix(), rotated.shift};
    const Problem a("sphere", d, raw::sphere, Vector::Zero(d), rotated, 0.0, false, 0);
    const Problem b("sphere", d, raw::sphere, Vector::Zero(d), plain, 0.0, true, 0);
    for (int k = 0; k < 20; ++k) {
        Vector x(d);
        rng.fill_normal(x);
        x *= 3.0;
        CHECK(evaluate(a, x) == doctest::Approx(evaluate(b, x)).epsilon(1e-12));
    }
}

TEST_CASE("rotated ellipsoid matches a hand composition at d = 4")
{
    const Problem p = make_problem("rotated_ellipsoid", 4, 23);
    REQUIRE(p.transform());
    const Matrix& r = p.transform()->rotation;
    const Vector& shift = p.transform()->shift;
    Rng rng(24);
    for (int k = 0; k < 10; ++k) {
        double x[4];
        for (double& xi : x)
            xi = rng.uniform(-5.0, 5.0);
        double expected = 0.0;
        for (int i = 0; i < 4; ++i) {
            double zi = 0.0;
            for (int j = 0; j < 4; ++j)
                zi += r(i, j) * (x[j] - shift[j]);
            expected += std::pow(1e6, i / 3.0) * zi * zi;
        }
        const Vector xv = Eigen::Map<Vector>(x, 4);
        CHECK(std::abs(-evaluate(p, xv) - expected) <= 1e-12 * std::max(1.0, expected));
    }
}

TEST_CASE("rotations are orthogonal")
{
    Rng rng(7);
    for (Eigen::Index d : {2, 8, 40}) {
        const Matrix r = random_rotation(d, rng);
        CHECK((r.transpose() * r - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    }
    for (const auto& name : suite_function_names()) {
        const Problem p = make_problem(name, 12, 3);
        if (p.transform() && p.transform()->rotation.size() != 0) {
            const Matrix& r = p.transform()->rotation;
            CHECK((r.transpose() * r - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("coordinate descent fails on the rotated ellipsoid only")
{
    const Problem separable = make_problem("ellipsoid", 8, 9);
    const Problem rotated = make_problem("rotated_ellipsoid", 8, 9);
    for (const Problem* p : {&separable, &rotated}) {
        Vector x = Vector::Zero(8);
        for (int sweep = 0; sweep < 50; ++sweep)
            for (Eigen::Index i = 0; i < 8; ++i)
                line_minimize(*p, x, i);
        const bool solved = evaluate(*p, x) >= p->target_fitness();
        CHECK(solved == p->separable());
    }
}

TEST_CASE("evaluations are counted and checked")
{
    const Problem p = make_problem("sphere", 3, 1);
    Evaluator e(p);
    for (int i = 0; i < 5; ++i)
        e(Vector::Zero(3));
    CHECK(e.evaluations() == 5);
    CHECK_THROWS_AS(e(Vector::Zero(4)), DimensionError);
    CHECK(e.evaluations() == 5);
}

TEST_CASE("suite construction")
{
    CHECK(suite_function_names().size() == 12);
    const std::set<std::string> unique(suite_function_names().begin(), suite_function_names().end());
    CHECK(unique.size() == 12);
    CHECK_THROWS_AS(make_problem("rastrigin", 4, 1), ConfigError);
    CHECK_THROWS_AS(make_problem("sphere", 1, 1), DimensionError);

    const auto suite = make_suite(5, 11);
    CHECK(suite.size() == 12);
    for (const auto& p : suite)
        CHECK(p.dimension() == 5);

    const Problem a = make_problem("tablet", 5, 11);
    const Problem b = make_problem("tablet", 5, 11);
    const Problem c = make_problem("tablet", 5, 12);
    CHECK(a.transform_digest() == b.transform_digest());
    CHECK(a.transform_digest() != c.transform_digest());

    SuiteOptions raw_options;
    raw_options.apply_transforms = false;
    CHECK(make_problem("tablet", 5, 11, raw_options).transform_digest() == "identity");
}

TEST_CASE("separability flags and shift ranges")
{
    for (const auto& name : suite_function_names()) {
        const Problem p = make_problem(name, 6, 2);
        const bool rotated = p.transform() && p.transform()->rotation.size() != 0;
        if (name != "rosenbrock")
            CHECK(p.separable() == !rotated);
        if (p.transform())
            CHECK(p.transform()->shift.cwiseAbs().maxCoeff() <= 4.0);
    }
    CHECK(make_problem("rosenbrock", 6, 2).transform()->shift.cwiseAbs().maxCoeff() <= 3.0);
}

TEST_CASE("manifest line")
{
    const auto j = nlohmann::json::parse(manifest_line(make_problem("sharp_ridge", 7, 4)));
    CHECK(j["function"] == "sharp_ridge");
    CHECK(j["dimension"] == 7);
    CHECK(j["seed"] == 4);
    CHECK(j["separable"] == false);
    CHECK(j["transform"].get<std::string>().size() == 16);
}

}
