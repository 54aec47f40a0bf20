#pragma once

// Independent numerical oracles. The dense routines here are textbook
// implementations written without Eigen's decompositions, and none of them
// call the O(d) paths they are used to check.

#include "r1nes/common.hpp"
#include "r1nes/rank_one_gaussian.hpp"
#include "r1nes/rng.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace r1nes::oracle {

/// e^{2 lambda} (I + u u^T), formed explicitly.
Matrix dense_covariance(const RankOneGaussian& dist);

/// Gauss-Jordan elimination with partial pivoting. Throws NumericalError if singular.
Matrix dense_inverse(const Matrix& a);

/// Cholesky-based log determinant of a symmetric positive definite matrix.
double dense_log_det(const Matrix& spd);

/// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.
std::vector<double> symmetric_eigenvalues(const Matrix& a);

/// log N(x; 0, cov) via dense inverse and determinant.
double dense_gaussian_log_pdf(const Matrix& cov, const Vector& x);

struct MonteCarloFisher {
    Matrix mean;            ///< (d+1)x(d+1), ordered (lambda, u)
    Matrix standard_error;  ///< per entry
    std::int64_t samples = 0;
};

/// Empirical E[score score^T] over draws from dist, scores from plain_grad.
MonteCarloFisher mc_fisher(const RankOneGaussian& dist, std::int64_t sample_count, Rng& rng);

using ScalarField = std::function<double(const Vector&)>;

/// Central differences per coordinate. Throws EvaluationError naming the
/// coordinate when fn is not finite at a probe point.
Vector finite_diff(const ScalarField& fn, const Vector& point, double step);

struct OracleReport {
    std::string quantity;
    std::vector<double> analytic;
    std::vector<double> oracle;
    std::string metric;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

OracleReport make_report(std::string quantity, std::vector<double> analytic, std::vector<double> oracle,
                         std::string metric, double error, double tolerance);

/// One JSON line per report.
std::string to_string(const OracleReport& report);

/// ||a - b||_inf / ||b||_inf.
double relative_error(const Vector& a, const Vector& b);

/// Random state for checks: mean 0, lambda uniform in [-1, 1], u ~ N(0, I).
RankOneGaussian random_state(Eigen::Index dimension, Rng& rng);

// Oracle checks shared by the test suites and `r1nes validate`. Each one
// draws its own states from `seed` and reports the worst case.

/// O(d) natural gradient vs dense inverse of fisher_exact times plain_grad.
OracleReport check_natural_gradient_dense(std::uint64_t seed, int states, double tolerance = 1e-10);
/// Natural lambda gradient vs its closed form written out independently.
OracleReport check_natural_lambda_closed_form(std::uint64_t seed, int states, double tolerance = 1e-12);
/// Explicit vector form of the natural u gradient vs the F^{-1} product route.
OracleReport check_natural_direction_closed_form(std::uint64_t seed, int states, double tolerance = 1e-10);
/// fisher_inverse assembled vs dense inverse of fisher_exact.
OracleReport check_fisher_inverse(std::uint64_t seed, Eigen::Index dimension, double tolerance = 1e-9);
/// fisher_exact vs Monte-Carlo, worst entry in units of standard error.
OracleReport check_fisher_monte_carlo(const RankOneGaussian& dist, std::uint64_t seed, std::int64_t samples,
                                      double max_standard_errors = 3.0);
OracleReport check_log_density(std::uint64_t seed, int states, double tolerance = 1e-9);
/// plain_grad vs central differences of the dense log pdf over (lambda, u).
OracleReport check_plain_grad(std::uint64_t seed, int states, double step = 1e-5, double tolerance = 1e-5);
/// Empirical covariance vs C; entry errors scaled by sqrt(C_ii C_jj).
OracleReport check_sampling_covariance(const RankOneGaussian& dist, std::uint64_t seed, std::int64_t samples,
                                       double tolerance = 0.05);
OracleReport check_inverse_covariance(std::uint64_t seed, int states, double tolerance = 1e-10);
OracleReport check_log_det(std::uint64_t seed, int states, double tolerance = 1e-10);

/// Every check above at its default size.
std::vector<OracleReport> run_oracle_suite(std::uint64_t seed);

} // namespace r1nes::oracle
