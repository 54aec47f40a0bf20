#pragma once

// Noise-free unimodal benchmark functions in the style of the BBOB suite.
//
// Raw functions are costs (minimization) with optimum value 0. A Problem
// wraps one in an optional transform z = R (x - shift) and exposes it as a
// fitness -(f(z) + f_opt) to be maximized. Evaluation only happens through an
// Evaluator, which counts every call.

#include "r1nes/common.hpp"
#include "r1nes/rng.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace r1nes::bench {

using Function = std::function<double(const Vector&)>;

struct Transform {
    Matrix rotation;  ///< empty means identity
    Vector shift;

    Vector apply(const Vector& x) const;
};

class Problem {
public:
    Problem(std::string name, Eigen::Index dimension, Function cost, Vector raw_optimum,
            std::optional<Transform> transform, double f_opt, bool separable, std::uint64_t seed);

    /// Problem given directly as a fitness to maximize, with a fixed target.
    static Problem from_fitness(std::string name, Eigen::Index dimension, Function fitness,
                                double target_fitness);

    const std::string& name() const { return name_; }
    Eigen::Index dimension() const { return dimension_; }
    bool separable() const { return separable_; }
    std::uint64_t seed() const { return seed_; }
    const std::optional<Transform>& transform() const { return transform_; }
    double f_opt() const { return f_opt_; }
    double target_fitness() const { return target_; }

    /// Location of the maximum in search space (shift + R^T z*).
    Vector optimum() const;
    /// Raw cost at an already-transformed point.
    double cost(const Vector& z) const;
    /// 16 hex digits over the rotation and shift bytes; "identity" without a transform.
    std::string transform_digest() const;

private:
    friend class Evaluator;
    double fitness(const Vector& x) const;

    std::string name_;
    Eigen::Index dimension_;
    Function cost_;
    Function direct_fitness_;
    Vector raw_optimum_;
    std::optional<Transform> transform_;
    double f_opt_ = 0.0;
    double target_ = -1e-8;
    bool separable_ = false;
    std::uint64_t seed_ = 0;
};

/// The only path to a fitness value. Counts evaluations; the count may be
/// bumped from concurrent evaluations.
class Evaluator {
public:
    explicit Evaluator(const Problem& problem)
        : problem_(&problem)
    {
    }
    Evaluator(const Evaluator&) = delete;
    Evaluator& operator=(const Evaluator&) = delete;

    /// Throws DimensionError on length mismatch.
    double operator()(const Vector& x);

    std::int64_t evaluations() const { return count_.load(std::memory_order_relaxed); }
    const Problem& problem() const { return *problem_; }

private:
    const Problem* problem_;
    std::atomic<std::int64_t> count_{0};
};

struct SuiteOptions {
    bool apply_transforms = true;
    /// Draw nonzero optimum values instead of f_opt = 0.
    bool nonzero_f_opt = false;
};

namespace raw {
double sphere(const Vector& z);
double ellipsoid(const Vector& z);
double tablet(const Vector& z);
double cigar(const Vector& z);
double rosenbrock(const Vector& z);
double sharp_ridge(const Vector& z);
double different_powers(const Vector& z);
double step_ellipsoid(const Vector& z);
double linear_slope(const Vector& z, const Vector& signs);
double attractive_sector(const Vector& z, const Vector& signs);
double bent_cigar(const Vector& z, const Matrix& rotation);
} // namespace raw

/// The twelve functions of the default unimodal suite.
const std::vector<std::string>& suite_function_names();
/// Every name make_problem accepts (the suite plus the cigar diagnostic).
const std::vector<std::string>& all_function_names();

/// Throws ConfigError for an unknown name, DimensionError for d < 2.
Problem make_problem(const std::string& name, Eigen::Index dimension, std::uint64_t seed,
                     const SuiteOptions& options = {});
std::vector<Problem> make_suite(Eigen::Index dimension, std::uint64_t seed,
                                const SuiteOptions& options = {});

/// Orthonormalized seeded Gaussian matrix (modified Gram-Schmidt).
Matrix random_rotation(Eigen::Index dimension, Rng& rng);

/// One JSON line: function, dimension, seed, separable, transform.
std::string manifest_line(const Problem& problem);

} // namespace r1nes::bench
