#pragma once

#include <stdexcept>
#include <string>

namespace tempnet {

/// Invalid input data or configuration. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: non-convergence, degenerate spectrum, undefined estimator.
/// Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem or parsing failure. Maps to CLI exit code 4.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tempnet
