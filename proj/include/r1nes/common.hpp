#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace r1nes {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vector or matrix size does not match the distribution / problem dimension.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// The rank-one direction has zero (or underflowed) length, so its
/// log-length and unit direction are undefined.
class DegenerateDirectionError : public Error {
public:
    using Error::Error;
};

/// An objective returned NaN or infinity.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// A numerical breakdown inside an update (e.g. loss of positive definiteness).
class NumericalError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

inline void require_dimension(Eigen::Index actual, Eigen::Index expected, const char* what)
{
    if (actual != expected)
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                             ", got " + std::to_string(actual));
}

} // namespace r1nes
