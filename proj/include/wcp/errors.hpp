#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace wcp {

inline constexpr double inf = std::numeric_limits<double>::infinity();

// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument values (out-of-domain parameters, dimension mismatch).
struct domain_error : error {
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// A model family fails the structural assumptions required for prior
// construction (non-monotone distance map, vanishing gradient, ...).
struct assumption_error : error {
    explicit assumption_error(const std::string& msg) : error(msg) {}
};

// Numerical failure: divergent integral, bracket failure, step underflow,
// degenerate level curve.
struct numerical_error : error {
    explicit numerical_error(const std::string& msg) : error(msg) {}
};

// Operation requires data the measure does not provide (e.g. missing cdf).
struct unsupported_error : error {
    explicit unsupported_error(const std::string& msg) : error(msg) {}
};

// Two-step construction attempted in an order whose first step is
// degenerate; the caller should swap the parameter order.
struct degenerate_order_error : error {
    explicit degenerate_order_error(const std::string& msg) : error(msg) {}
};

// Invalid run configuration (CLI / study configs).
struct config_error : error {
    explicit config_error(const std::string& msg) : error(msg) {}
};

}  // namespace wcp
