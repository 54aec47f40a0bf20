#include "r1nes/validation.hpp"

#include "r1nes/natural_gradient.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace r1nes::oracle {

Matrix dense_covariance(const RankOneGaussian& dist)
{
    const Eigen::Index d = dist.dimension();
    const double var = std::exp(2.0 * dist.log_scale());
    const Vector& u = dist.direction();
    Matrix c(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            c(i, j) = var * ((i == j ? 1.0 : 0.0) + u[i] * u[j]);
    return c;
}

Matrix dense_inverse(const Matrix& a)
{
    const Eigen::Index n = a.rows();
    if (a.cols() != n)
        throw DimensionError("dense_inverse needs a square matrix");
    Matrix work = a;
    Matrix inv = Matrix::Identity(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = col;
        for (Eigen::Index row = col + 1; row < n; ++row)
            if (std::abs(work(row, col)) > std::abs(work(pivot, col)))
                pivot = row;
        if (work(pivot, col) == 0.0)
            throw NumericalError("dense_inverse: matrix is singular");
        work.row(col).swap(work.row(pivot));
        inv.row(col).swap(inv.row(pivot));
        const double p = work(col, col);
        work.row(col) /= p;
        inv.row(col) /= p;
        for (Eigen::Index row = 0; row < n; ++row) {
            if (row == col)
                continue;
            const double factor = work(row, col);
            if (factor == 0.0)
                continue;
            work.row(row) -= factor * work.row(col);
            inv.row(row) -= factor * inv.row(col);
        }
    }
    return inv;
}

double dense_log_det(const Matrix& spd)
{
    const Eigen::Index n = spd.rows();
    Matrix l = Matrix::Zero(n, n);
    double log_det = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double diag = spd(j, j);
        for (Eigen::Index k = 0; k < j; ++k)
            diag -= l(j, k) * l(j, k);
        if (diag <= 0.0)
            throw NumericalError("dense_log_det: matrix is not positive definite");
        l(j, j) = std::sqrt(diag);
        log_det += 2.0 * std::log(l(j, j));
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = spd(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return log_det;
}

std::vector<double> symmetric_eigenvalues(const Matrix& input)
{
    const Eigen::Index n = input.rows();
    Matrix a = input;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
                off += a(i, j) * a(i, j);
        if (off <= 1e-30 * (1.0 + a.squaredNorm()))
            break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0)
                    continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        eig[static_cast<std::size_t>(i)] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

double dense_gaussian_log_pdf(const Matrix& cov, const Vector& x)
{
    const Eigen::Index d = cov.rows();
    require_dimension(x.size(), d, "dense_gaussian_log_pdf");
    const Matrix inv = dense_inverse(cov);
    double quad = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            quad += x[i] * inv(i, j) * x[j];
    return -0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi) - 0.5 * dense_log_det(cov) -
           0.5 * quad;
}

MonteCarloFisher mc_fisher(const RankOneGaussian& dist, std::int64_t sample_count, Rng& rng)
{
    const Eigen::Index m = dist.dimension() + 1;
    Matrix sum = Matrix::Zero(m, m);
    Matrix sum_sq = Matrix::Zero(m, m);
    Vector score(m);
    for (std::int64_t s = 0; s < sample_count; ++s) {
        const Sample draw = sample(dist, rng);
        const PlainGradient g = plain_grad(dist, draw.x);
        score[0] = g.log_scale;
        score.tail(m - 1) = g.direction;
        const Matrix outer = score * score.transpose();
        sum += outer;
        sum_sq += outer.cwiseProduct(outer);
    }
    const double n = static_cast<double>(sample_count);
    MonteCarloFisher out;
    out.samples = sample_count;
    out.mean = sum / n;
    const Matrix variance = (sum_sq / n - out.mean.cwiseProduct(out.mean)) * (n / (n - 1.0));
    out.standard_error = (variance.array().max(0.0) / n).sqrt().matrix();
    return out;
}

Vector finite_diff(const ScalarField& fn, const Vector& point, double step)
{
    if (!(step > 0.0))
        throw Error("finite_diff step must be positive");
    Vector grad(point.size());
    Vector probe = point;
    for (Eigen::Index i = 0; i < point.size(); ++i) {
        probe[i] = point[i] + step;
        const double up = fn(probe);
        probe[i] = point[i] - step;
        const double down = fn(probe);
        probe[i] = point[i];
        if (!std::isfinite(up) || !std::isfinite(down))
            throw EvaluationError("finite_diff: non-finite function value at coordinate " + std::to_string(i));
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

OracleReport make_report(std::string quantity, std::vector<double> analytic, std::vector<double> oracle,
                         std::string metric, double error, double tolerance)
{
    OracleReport r;
    r.quantity = std::move(quantity);
    r.analytic = std::move(analytic);
    r.oracle = std::move(oracle);
    r.metric = std::move(metric);
    r.error = error;
    r.tolerance = tolerance;
    r.pass = error <= tolerance;
    return r;
}

std::string to_string(const OracleReport& report)
{
    nlohmann::json j;
    j["quantity"] = report.quantity;
    j["metric"] = report.metric;
    j["error"] = report.error;
    j["tolerance"] = report.tolerance;
    j["pass"] = report.pass;
    // Long vectors would swamp the log; keep the leading entries.
    auto head = [](const std::vector<double>& v) {
        return std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(v.size(), 6)));
    };
    j["analytic"] = head(report.analytic);
    j["oracle"] = head(report.oracle);
    return j.dump();
}

double relative_error(const Vector& a, const Vector& b)
{
    const double scale = b.lpNorm<Eigen::Infinity>();
    const double diff = (a - b).lpNorm<Eigen::Infinity>();
    return scale > 0.0 ? diff / scale : diff;
}

RankOneGaussian random_state(Eigen::Index dimension, Rng& rng)
{
    Vector u(dimension);
    rng.fill_normal(u);
    return RankOneGaussian(Vector::Zero(dimension), rng.uniform(-1.0, 1.0), std::move(u));
}

namespace {

std::vector<double> to_std(const Vector& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::Index random_dimension(Rng& rng)
{
    return 2 + static_cast<Eigen::Index>(rng.engine()() % 15);
}

Vector stacked(double head, const Vector& tail)
{
    Vector out(tail.size() + 1);
    out[0] = head;
    out.tail(tail.size()) = tail;
    return out;
}

/// Tracks the worst case over a batch of checks.
struct Worst {
    double error = -1.0;
    Vector analytic;
    Vector oracle;

    void offer(double e, const Vector& a, const Vector& o)
    {
        if (e > error) {
            error = e;
            analytic = a;
            oracle = o;
        }
    }
};

} // namespace

OracleReport check_natural_gradient_dense(std::uint64_t seed, int states, double tolerance)
{
    Rng rng(seed);
    Worst worst;
    for (int s = 0; s < states; ++s) {
        const RankOneGaussian dist = random_state(random_dimension(rng), rng);
        const Vector x = sample(dist, rng).x;
        const NaturalGradient g = natural_grad_sample(dist, x);
        const PlainGradient plain = plain_grad(dist, x);
        const Vector dense = dense_inverse(fisher_exact(dist)) * stacked(plain.log_scale, plain.direction);
        const Vector fast = stacked(g.log_scale, g.direction);
        worst.offer(relative_error(fast, dense), fast, dense);
    }
    return make_report("natural gradient (lambda, u) vs dense F^-1 * plain gradient", to_std(worst.analytic),
                       to_std(worst.oracle), "max relative inf-norm error", worst.error, tolerance);
}

OracleReport check_natural_lambda_closed_form(std::uint64_t seed, int states, double tolerance)
{
    Rng rng(seed);
    Worst worst;
    for (int s = 0; s < states; ++s) {
        const RankOneGaussian dist = random_state(random_dimension(rng), rng);
        const Vector x = sample(dist, rng).x;
        const double d = static_cast<double>(dist.dimension());
        const double e = std::exp(-2.0 * dist.log_scale());
        const Vector v = dist.direction() / dist.direction().norm();
        const double xv = x.dot(v);
        const double closed = ((e * x.dot(x) - d) - (e * xv * xv - 1.0)) / (2.0 * (d - 1.0));
        const double fast = natural_grad_sample(dist, x).log_scale;
        const double err = std::abs(fast - closed) / std::max(1.0, std::abs(closed));
        worst.offer(err, Vector::Constant(1, fast), Vector::Constant(1, closed));
    }
    return make_report("natural lambda gradient vs closed form", to_std(worst.analytic), to_std(worst.oracle),
                       "max |a-b| / max(1, |b|)", worst.error, tolerance);
}

OracleReport check_natural_direction_closed_form(std::uint64_t seed, int states, double tolerance)
{
    Rng rng(seed);
    Worst worst;
    for (int s = 0; s < states; ++s) {
        const RankOneGaussian dist = random_state(random_dimension(rng), rng);
        const Vector x = sample(dist, rng).x;
        const Vector product = natural_grad_sample(dist, x).direction;
        const Vector closed = natural_direction_closed_form(dist, x);
        worst.offer(relative_error(closed, product), closed, product);
    }
    return make_report("natural u gradient closed form vs F^-1 product", to_std(worst.analytic),
                       to_std(worst.oracle), "max relative inf-norm error", worst.error, tolerance);
}

OracleReport check_fisher_inverse(std::uint64_t seed, Eigen::Index dimension, double tolerance)
{
    Rng rng(seed);
    const RankOneGaussian dist = random_state(dimension, rng);
    const Matrix fisher = fisher_exact(dist);
    const Matrix assembled = fisher_inverse(dist).assemble();
    const Matrix dense = dense_inverse(fisher);
    const double inverse_err = (assembled - dense).lpNorm<Eigen::Infinity>() /
                               dense.lpNorm<Eigen::Infinity>();
    const Matrix identity = Matrix::Identity(dimension + 1, dimension + 1);
    const double product_err = (fisher * assembled - identity).lpNorm<Eigen::Infinity>();
    const Eigen::Map<const Vector> a(assembled.data(), assembled.size());
    const Eigen::Map<const Vector> o(dense.data(), dense.size());
    return make_report("assembled inverse Fisher vs dense inverse (d=" + std::to_string(dimension) + ")",
                       to_std(a), to_std(o), "max(relative entry error, |F F^-1 - I|_max)",
                       std::max(inverse_err, product_err), tolerance);
}

OracleReport check_fisher_monte_carlo(const RankOneGaussian& dist, std::uint64_t seed, std::int64_t samples,
                                      double max_standard_errors)
{
    Rng rng(seed);
    const MonteCarloFisher mc = mc_fisher(dist, samples, rng);
    const Matrix exact = fisher_exact(dist);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < exact.rows(); ++i)
        for (Eigen::Index j = 0; j < exact.cols(); ++j)
            worst = std::max(worst, std::abs(exact(i, j) - mc.mean(i, j)) / mc.standard_error(i, j));
    const Eigen::Map<const Vector> a(exact.data(), exact.size());
    const Eigen::Map<const Vector> o(mc.mean.data(), mc.mean.size());
    return make_report("Fisher exact vs Monte-Carlo (" + std::to_string(samples) + " samples)", to_std(a),
                       to_std(o), "max |exact - mc| / standard error", worst, max_standard_errors);
}

OracleReport check_log_density(std::uint64_t seed, int states, double tolerance)
{
    Rng rng(seed);
    Worst worst;
    for (int s = 0; s < states; ++s) {
        const RankOneGaussian dist = random_state(random_dimension(rng), rng);
        Vector x(dist.dimension());
        rng.fill_normal(x);
        const double fast = log_density(dist, x);
        const double dense = dense_gaussian_log_pdf(dense_covariance(dist), x);
        worst.offer(std::abs(fast - dense), Vector::Constant(1, fast), Vector::Constant(1, dense));
    }
    return make_report("log density vs dense Gaussian log pdf", to_std(worst.analytic), to_std(worst.oracle),
                       "max absolute error", worst.error, tolerance);
}

OracleReport check_plain_grad(std::uint64_t seed, int states, double step, double tolerance)
{
    Rng rng(seed);
    Worst worst;
    for (int s = 0; s < states; ++s) {
        const RankOneGaussian dist = random_state(random_dimension(rng), rng);
        const Vector x = sample(dist, rng).x;
        const Eigen::Index d = dist.dimension();
        const ScalarField density = [&](const Vector& p) {
            const RankOneGaussian probe(Vector::Zero(d), p[0], p.tail(d));
            return dense_gaussian_log_pdf(dense_covariance(probe), x);
        };
        const PlainGradient g = plain_grad(dist, x);
        const Vector analytic = stacked(g.log_scale, g.direction);
        const Vector numeric = finite_diff(density, stacked(dist.log_scale(), dist.direction()), step);
        worst.offer(relative_error(analytic, numeric), analytic, numeric);
    }
    return make_report("plain gradient vs central differences", to_std(worst.analytic), to_std(worst.oracle),
                       "max relative inf-norm error", worst.error, tolerance);
}

OracleReport check_sampling_covariance(const RankOneGaussian& dist, std::uint64_t seed, std::int64_t samples,
                                       double tolerance)
{
    Rng rng(seed);
    const Eigen::Index d = dist.dimension();
    Vector sum = Vector::Zero(d);
    Matrix outer = Matrix::Zero(d, d);
    for (std::int64_t s = 0; s < samples; ++s) {
        const Vector x = sample(dist, rng).x;
        sum += x;
        outer += x * x.transpose();
    }
    const double n = static_cast<double>(samples);
    const Vector mean = sum / n;
    const Matrix empirical = (outer - n * mean * mean.transpose()) / (n - 1.0);
    const Matrix exact = dense_covariance(dist);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            worst = std::max(worst, std::abs(empirical(i, j) - exact(i, j)) / std::sqrt(exact(i, i) * exact(j, j)));
    const Eigen::Map<const Vector> a(exact.data(), exact.size());
    const Eigen::Map<const Vector> o(empirical.data(), empirical.size());
    return make_report("sample covariance vs C (" + std::to_string(samples) + " samples)", to_std(a), to_std(o),
                       "max |C_hat - C|_ij / sqrt(C_ii C_jj)", worst, tolerance);
}

OracleReport check_inverse_covariance(std::uint64_t seed, int states, double tolerance)
{
    Rng rng(seed);
    Worst worst;
    for (int s = 0; s < states; ++s) {
        const RankOneGaussian dist = random_state(random_dimension(rng), rng);
        Vector w(dist.dimension());
        rng.fill_normal(w);
        const Vector fast = apply_inverse_covariance(dist, w);
        const Vector dense = dense_inverse(dense_covariance(dist)) * w;
        worst.offer(relative_error(fast, dense), fast, dense);
        const Vector round_trip = dense_covariance(dist) * fast;
        worst.offer(relative_error(round_trip, w), round_trip, w);
    }
    return make_report("C^-1 w vs dense inverse", to_std(worst.analytic), to_std(worst.oracle),
                       "max relative inf-norm error", worst.error, tolerance);
}

OracleReport check_log_det(std::uint64_t seed, int states, double tolerance)
{
    Rng rng(seed);
    Worst worst;
    for (int s = 0; s < states; ++s) {
        const RankOneGaussian dist = random_state(random_dimension(rng), rng);
        const double fast = log_det(dist);
        const double dense = dense_log_det(dense_covariance(dist));
        worst.offer(std::abs(fast - dense), Vector::Constant(1, fast), Vector::Constant(1, dense));
    }
    return make_report("log det C vs dense Cholesky", to_std(worst.analytic), to_std(worst.oracle),
                       "max absolute error", worst.error, tolerance);
}

std::vector<OracleReport> run_oracle_suite(std::uint64_t seed)
{
    std::vector<OracleReport> reports;
    reports.push_back(check_natural_gradient_dense(derive_seed(seed, 1), 100));
    reports.push_back(check_natural_lambda_closed_form(derive_seed(seed, 2), 100));
    reports.push_back(check_natural_direction_closed_form(derive_seed(seed, 3), 100));
    reports.push_back(check_fisher_inverse(derive_seed(seed, 4), 3));
    reports.push_back(check_fisher_inverse(derive_seed(seed, 5), 4));
    {
        Rng rng(derive_seed(seed, 6));
        const RankOneGaussian dist = random_state(3, rng);
        reports.push_back(check_fisher_monte_carlo(dist, derive_seed(seed, 7), 1000000));
    }
    reports.push_back(check_log_density(derive_seed(seed, 8), 50));
    reports.push_back(check_plain_grad(derive_seed(seed, 9), 50));
    {
        const RankOneGaussian dist(Vector::Zero(3), 0.1, (Vector(3) << 1.0, 2.0, 0.0).finished());
        reports.push_back(check_sampling_covariance(dist, derive_seed(seed, 10), 100000));
    }
    reports.push_back(check_inverse_covariance(derive_seed(seed, 11), 50));
    reports.push_back(check_log_det(derive_seed(seed, 12), 50));
    return reports;
}

} // namespace r1nes::oracle
