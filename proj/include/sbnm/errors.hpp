// errors.hpp: Exception types shared by all sbnm modules

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sbnm {

// Invalid user configuration (bad key, bad value, missing field).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a formula.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Non-finite values, failed quadrature, exhausted subdivision.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Truncated Hilbert space larger than the configured budget.
struct ResourceError : std::runtime_error {
    ResourceError(const std::string& what, std::size_t dimension)
        : std::runtime_error(what), dimension(dimension) {}
    std::size_t dimension;
};

// Mismatched time grids or series lengths.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// File access and schema violations in CSV input.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sbnm
