#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace mcprc {

/// Raised when an experiment configuration is missing sections or holds
/// out-of-range values. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a stochastic run would exceed the particle-step budget.
/// The CLI maps this to exit code 3.
struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a linear solve or factorization cannot be completed.
/// The CLI maps this to exit code 4.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_finite(double x) {
    return std::isfinite(x);
}

/// Standard normal pdf.
inline double norm_pdf(double z) {
    static constexpr double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

/// Standard normal cdf via the complementary error function.
inline double norm_cdf(double z) {
    return 0.5 * std::erfc(-z * 0.70710678118654752440);
}

} // namespace mcprc
