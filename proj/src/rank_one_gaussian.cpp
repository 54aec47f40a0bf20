#include "r1nes/rank_one_gaussian.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <vector>

namespace r1nes {

namespace {

bool all_finite(const Vector& v)
{
    return v.allFinite();
}

} // namespace

RankOneGaussian::RankOneGaussian(Vector mean, double log_scale, Vector direction)
    : mean_(std::move(mean))
    , log_scale_(log_scale)
    , direction_(std::move(direction))
{
    if (mean_.size() < 2)
        throw DimensionError("rank-one Gaussian requires dimension >= 2, got " +
                             std::to_string(mean_.size()));
    require_dimension(direction_.size(), mean_.size(), "direction");
    if (!std::isfinite(log_scale_) || !all_finite(mean_) || !all_finite(direction_))
        throw Error("rank-one Gaussian state must be finite");
    norm_sq_ = direction_.squaredNorm();
}

double RankOneGaussian::scale() const
{
    return std::exp(log_scale_);
}

double RankOneGaussian::direction_norm() const
{
    return std::sqrt(norm_sq_);
}

double RankOneGaussian::log_length() const
{
    if (norm_sq_ <= 0.0)
        throw DegenerateDirectionError("log-length undefined for a zero direction");
    return 0.5 * std::log(norm_sq_);
}

Vector RankOneGaussian::unit_direction() const
{
    if (norm_sq_ <= 0.0)
        throw DegenerateDirectionError("unit direction undefined for a zero direction");
    return direction_ / std::sqrt(norm_sq_);
}

RankOneGaussian RankOneGaussian::with_mean(Vector mean) const
{
    return RankOneGaussian(std::move(mean), log_scale_, direction_);
}

Sample make_sample(const RankOneGaussian& dist, Vector y, double z)
{
    require_dimension(y.size(), dist.dimension(), "isotropic draw");
    Sample s;
    s.x = dist.scale() * (y + z * dist.direction());
    s.y = std::move(y);
    s.z = z;
    return s;
}

Sample sample(const RankOneGaussian& dist, Rng& rng)
{
    Vector y(dist.dimension());
    rng.fill_normal(y);
    const double z = rng.normal();
    return make_sample(dist, std::move(y), z);
}

Vector apply_inverse_covariance(const RankOneGaussian& dist, const Vector& w)
{
    require_dimension(w.size(), dist.dimension(), "apply_inverse_covariance");
    const Vector& u = dist.direction();
    const double coeff = u.dot(w) / (1.0 + dist.direction_norm_sq());
    return std::exp(-2.0 * dist.log_scale()) * (w - coeff * u);
}

double log_det(const RankOneGaussian& dist)
{
    const double d = static_cast<double>(dist.dimension());
    return 2.0 * d * dist.log_scale() + std::log1p(dist.direction_norm_sq());
}

double log_density(const RankOneGaussian& dist, const Vector& x)
{
    require_dimension(x.size(), dist.dimension(), "log_density");
    const double d = static_cast<double>(dist.dimension());
    const double lambda = dist.log_scale();
    const double r2 = dist.direction_norm_sq();
    const double inv_var = std::exp(-2.0 * lambda);
    const double xu = x.dot(dist.direction());
    return -0.5 * d * std::log(2.0 * std::numbers::pi) - lambda * d - 0.5 * std::log1p(r2) -
           0.5 * inv_var * x.squaredNorm() + 0.5 * inv_var / (1.0 + r2) * xu * xu;
}

PlainGradient plain_grad(const RankOneGaussian& dist, const Vector& x)
{
    require_dimension(x.size(), dist.dimension(), "plain_grad");
    const double d = static_cast<double>(dist.dimension());
    const double r2 = dist.direction_norm_sq();
    const double inv_var = std::exp(-2.0 * dist.log_scale());
    const double xu = x.dot(dist.direction());
    const double p = 1.0 + r2;
    const Vector& u = dist.direction();

    PlainGradient g;
    g.log_scale = -d + inv_var * (x.squaredNorm() - xu * xu / p);
    g.direction = (-1.0 / p - inv_var * xu * xu / (p * p)) * u + (inv_var * xu / p) * x;
    return g;
}

std::string to_record(const Checkpoint& checkpoint)
{
    const auto& s = checkpoint.state;
    nlohmann::json j;
    j["mu"] = std::vector<double>(s.mean().data(), s.mean().data() + s.dimension());
    j["lambda"] = s.log_scale();
    j["u"] = std::vector<double>(s.direction().data(), s.direction().data() + s.dimension());
    j["seed"] = checkpoint.seed;
    j["epoch"] = checkpoint.epoch;
    return j.dump();
}

Checkpoint checkpoint_from_record(const std::string& line)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
        const auto mu = j.at("mu").get<std::vector<double>>();
        const auto u = j.at("u").get<std::vector<double>>();
        Vector mean = Eigen::Map<const Vector>(mu.data(), static_cast<Eigen::Index>(mu.size()));
        Vector direction = Eigen::Map<const Vector>(u.data(), static_cast<Eigen::Index>(u.size()));
        return Checkpoint{RankOneGaussian(std::move(mean), j.at("lambda").get<double>(),
                                          std::move(direction)),
                          j.at("seed").get<std::uint64_t>(), j.at("epoch").get<std::uint64_t>()};
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed checkpoint record: ") + e.what());
    }
}

} // namespace r1nes
