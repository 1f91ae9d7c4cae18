#pragma once

#include <stdexcept>
#include <string>

namespace blk {

/// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Nonpositive dimensions, truncation length, grid sizes, etc.
struct invalid_geometry_error : error {
    using error::error;
};

/// Parameter outside its admissible range (weight exponent, theta, dt, ...).
struct invalid_parameter_error : error {
    using error::error;
};

/// Shape mismatch between fields, states, and grids.
struct dimension_error : error {
    using error::error;
};

/// Linear-solve failures (singular factorization, NaN propagation).
struct solver_error : error {
    using error::error;
};

/// Non-finite data where finite values are required.
struct invalid_data_error : error {
    using error::error;
};

/// Filesystem failures when persisting outputs.
struct io_error : error {
    using error::error;
};

}  // namespace blk
