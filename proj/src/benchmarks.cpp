#include "r1nes/benchmarks.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <sstream>

namespace r1nes::bench {

Vector Transform::apply(const Vector& x) const
{
    if (rotation.size() == 0)
        return x - shift;
    return rotation * (x - shift);
}

Problem::Problem(std::string name, Eigen::Index dimension, Function cost, Vector raw_optimum,
                 std::optional<Transform> transform, double f_opt, bool separable, std::uint64_t seed)
    : name_(std::move(name))
    , dimension_(dimension)
    , cost_(std::move(cost))
    , raw_optimum_(std::move(raw_optimum))
    , transform_(std::move(transform))
    , f_opt_(f_opt)
    , target_(-(f_opt + 1e-8))
    , separable_(separable)
    , seed_(seed)
{
    if (dimension_ < 2)
        throw DimensionError("problem dimension must be >= 2, got " + std::to_string(dimension_));
    require_dimension(raw_optimum_.size(), dimension_, "raw optimum");
}

Problem Problem::from_fitness(std::string name, Eigen::Index dimension, Function fitness,
                              double target_fitness)
{
    Problem p(std::move(name), dimension, nullptr, Vector::Zero(dimension), std::nullopt, 0.0, false, 0);
    p.direct_fitness_ = std::move(fitness);
    p.target_ = target_fitness;
    return p;
}

Vector Problem::optimum() const
{
    if (!transform_)
        return raw_optimum_;
    if (transform_->rotation.size() == 0)
        return transform_->shift + raw_optimum_;
    return transform_->shift + transform_->rotation.transpose() * raw_optimum_;
}

double Problem::cost(const Vector& z) const
{
    require_dimension(z.size(), dimension_, name_.c_str());
    if (!cost_)
        return -direct_fitness_(z);
    return cost_(z);
}

double Problem::fitness(const Vector& x) const
{
    require_dimension(x.size(), dimension_, name_.c_str());
    if (direct_fitness_)
        return direct_fitness_(x);
    const double value = transform_ ? cost_(transform_->apply(x)) : cost_(x);
    return -(value + f_opt_);
}

std::string Problem::transform_digest() const
{
    if (!transform_)
        return "identity";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const double* data, Eigen::Index count) {
        for (Eigen::Index i = 0; i < count; ++i) {
            unsigned char bytes[sizeof(double)];
            std::memcpy(bytes, data + i, sizeof(double));
            for (unsigned char b : bytes) {
                h ^= b;
                h *= 0x100000001b3ULL;
            }
        }
    };
    feed(transform_->rotation.data(), transform_->rotation.size());
    feed(transform_->shift.data(), transform_->shift.size());
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

double Evaluator::operator()(const Vector& x)
{
    const double f = problem_->fitness(x);
    count_.fetch_add(1, std::memory_order_relaxed);
    return f;
}

namespace raw {

namespace {

double exponent_ratio(Eigen::Index i, Eigen::Index d)
{
    return static_cast<double>(i) / static_cast<double>(d - 1);
}

} // namespace

double sphere(const Vector& z)
{
    return z.squaredNorm();
}

double ellipsoid(const Vector& z)
{
    const Eigen::Index d = z.size();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        sum += std::pow(10.0, 6.0 * exponent_ratio(i, d)) * z[i] * z[i];
    return sum;
}

double tablet(const Vector& z)
{
    return 1e6 * z[0] * z[0] + z.tail(z.size() - 1).squaredNorm();
}

double cigar(const Vector& z)
{
    return z[0] * z[0] + 1e6 * z.tail(z.size() - 1).squaredNorm();
}

double rosenbrock(const Vector& z)
{
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < z.size(); ++i) {
        const double a = z[i + 1] - z[i] * z[i];
        const double b = 1.0 - z[i];
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

double sharp_ridge(const Vector& z)
{
    return z[0] * z[0] + 100.0 * z.tail(z.size() - 1).norm();
}

double different_powers(const Vector& z)
{
    const Eigen::Index d = z.size();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        sum += std::pow(std::abs(z[i]), 2.0 + 4.0 * exponent_ratio(i, d));
    return std::sqrt(sum);
}

double step_ellipsoid(const Vector& z)
{
    const Eigen::Index d = z.size();
    double sum = 0.0;
    double first = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double scaled = std::pow(10.0, 0.5 * exponent_ratio(i, d)) * z[i];
        if (i == 0)
            first = std::abs(scaled);
        const double rounded =
            std::abs(scaled) > 0.5 ? std::round(scaled) : std::round(10.0 * scaled) / 10.0;
        sum += std::pow(10.0, 2.0 * exponent_ratio(i, d)) * rounded * rounded;
    }
    return 0.1 * std::max(first / 1e4, sum);
}

double linear_slope(const Vector& z, const Vector& signs)
{
    const Eigen::Index d = z.size();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double bound = 5.0 * signs[i];
        const double zi = bound * z[i] < 25.0 ? z[i] : bound;
        const double slope = signs[i] * std::pow(10.0, exponent_ratio(i, d));
        sum += 5.0 * std::abs(slope) - slope * zi;
    }
    return sum;
}

double attractive_sector(const Vector& z, const Vector& signs)
{
    double sum = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double s = z[i] * signs[i] > 0.0 ? 100.0 : 1.0;
        sum += s * s * z[i] * z[i];
    }
    return sum;
}

double bent_cigar(const Vector& z, const Matrix& rotation)
{
    const Eigen::Index d = z.size();
    Vector bent = z;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (z[i] > 0.0)
            bent[i] = std::pow(z[i], 1.0 + 0.5 * exponent_ratio(i, d) * std::sqrt(z[i]));
    }
    if (rotation.size() != 0)
        bent = rotation * bent;
    return cigar(bent);
}

} // namespace raw

const std::vector<std::string>& suite_function_names()
{
    static const std::vector<std::string> names = {
        "sphere",           "ellipsoid",  "linear_slope",   "attractive_sector",
        "step_ellipsoid",   "rosenbrock", "rotated_rosenbrock", "rotated_ellipsoid",
        "tablet",           "bent_cigar", "sharp_ridge",    "different_powers",
    };
    return names;
}

const std::vector<std::string>& all_function_names()
{
    static const std::vector<std::string> names = [] {
        auto n = suite_function_names();
        n.push_back("cigar");
        return n;
    }();
    return names;
}

Matrix random_rotation(Eigen::Index dimension, Rng& rng)
{
    Matrix m(dimension, dimension);
    for (Eigen::Index j = 0; j < dimension; ++j)
        for (Eigen::Index i = 0; i < dimension; ++i)
            m(i, j) = rng.normal();
    for (Eigen::Index j = 0; j < dimension; ++j) {
        for (Eigen::Index k = 0; k < j; ++k)
            m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
        m.col(j).normalize();
    }
    return m;
}

namespace {

Vector random_signs(Eigen::Index d, Rng& rng)
{
    Vector s(d);
    for (Eigen::Index i = 0; i < d; ++i)
        s[i] = rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    return s;
}

double draw_f_opt(Rng& rng)
{
    const double ratio = 100.0 * rng.normal() / rng.normal();
    return std::clamp(std::round(ratio) / 100.0, -1000.0, 1000.0);
}

} // namespace

Problem make_problem(const std::string& name, Eigen::Index d, std::uint64_t seed,
                     const SuiteOptions& options)
{
    if (d < 2)
        throw DimensionError("benchmark dimension must be >= 2, got " + std::to_string(d));
    const auto& names = all_function_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw ConfigError("unknown benchmark function '" + name + "'");

    const std::uint64_t problem_seed = derive_seed(seed, name);
    Rng rng(problem_seed);

    const bool separable =
        name == "sphere" || name == "ellipsoid" || name == "linear_slope" || name == "attractive_sector";
    const bool rotated = !separable && name != "rosenbrock";
    const double shift_bound = (name == "rosenbrock" || name == "rotated_rosenbrock") ? 3.0 : 4.0;

    std::optional<Transform> transform;
    if (options.apply_transforms && name != "linear_slope") {
        Transform t;
        if (rotated)
            t.rotation = random_rotation(d, rng);
        t.shift.resize(d);
        for (Eigen::Index i = 0; i < d; ++i)
            t.shift[i] = rng.uniform(-shift_bound, shift_bound);
        transform = std::move(t);
    }
    const double f_opt = options.nonzero_f_opt ? draw_f_opt(rng) : 0.0;

    Vector raw_optimum = Vector::Zero(d);
    Function cost;
    if (name == "sphere") {
        cost = raw::sphere;
    } else if (name == "ellipsoid" || name == "rotated_ellipsoid") {
        cost = raw::ellipsoid;
    } else if (name == "linear_slope") {
        const Vector signs = options.apply_transforms ? random_signs(d, rng) : Vector::Ones(d);
        raw_optimum = 5.0 * signs;
        cost = [signs](const Vector& z) { return raw::linear_slope(z, signs); };
    } else if (name == "attractive_sector") {
        const Vector signs = transform ? Vector(transform->shift.array().sign()) : Vector::Ones(d);
        cost = [signs](const Vector& z) { return raw::attractive_sector(z, signs); };
    } else if (name == "step_ellipsoid") {
        cost = raw::step_ellipsoid;
    } else if (name == "rosenbrock" || name == "rotated_rosenbrock") {
        raw_optimum = Vector::Ones(d);
        cost = raw::rosenbrock;
    } else if (name == "tablet") {
        cost = raw::tablet;
    } else if (name == "cigar") {
        cost = raw::cigar;
    } else if (name == "bent_cigar") {
        Matrix rotation = transform ? transform->rotation : Matrix();
        cost = [rotation](const Vector& z) { return raw::bent_cigar(z, rotation); };
    } else if (name == "sharp_ridge") {
        cost = raw::sharp_ridge;
    } else {
        cost = raw::different_powers;
    }

    return Problem(name, d, std::move(cost), std::move(raw_optimum), std::move(transform), f_opt,
                   separable, seed);
}

std::vector<Problem> make_suite(Eigen::Index d, std::uint64_t seed, const SuiteOptions& options)
{
    std::vector<Problem> suite;
    for (const auto& name : suite_function_names())
        suite.push_back(make_problem(name, d, seed, options));
    return suite;
}

std::string manifest_line(const Problem& problem)
{
    nlohmann::json j;
    j["function"] = problem.name();
    j["dimension"] = problem.dimension();
    j["seed"] = problem.seed();
    j["separable"] = problem.separable();
    j["transform"] = problem.transform_digest();
    j["f_opt"] = problem.f_opt();
    return j.dump();
}

} // namespace r1nes::bench
