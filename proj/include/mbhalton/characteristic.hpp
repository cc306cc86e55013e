#pragma once

#include "mbhalton/wide.hpp"

#include <stdexcept>
#include <string>

namespace mbhalton {

/// Default residual tolerance for the m-bonacci number: about 60 bits past double.
inline constexpr double default_root_precision = 1e-30;

namespace detail {

// p(x) = x^m - x^{m-1} - ... - x - 1 and p'(x), by Horner.
inline void characteristic_eval(int m, wide_real x, wide_real& value, wide_real& slope)
{
    value = 1;
    slope = 0;
    for (int i = 1; i <= m; ++i) {
        slope = slope * x + value;
        value = value * x - 1;
    }
}

} // namespace detail

/// Residual x^m - sum_{j<m} x^j.
inline wide_real characteristic_residual(int m, wide_real x)
{
    wide_real v, d;
    detail::characteristic_eval(m, x, v, d);
    return v;
}

/// Dominant root phi_m in (1,2) of x^m = x^{m-1} + ... + x + 1.
///
/// Bisection on [1,2] brackets the root to ~1e-6, Newton polishes it until the
/// residual is below `precision`. Throws std::runtime_error if the iteration
/// cap is hit, which means the precision is beyond what wide_real can deliver.
inline wide_real dominant_root(int m, double precision = default_root_precision)
{
    if (m < 2)
        throw std::invalid_argument("dominant_root: m must be >= 2, got " + std::to_string(m));
    if (!(precision > 0))
        throw std::invalid_argument("dominant_root: precision must be positive");

    // p(1) = 1 - m < 0, p(2) = 1 > 0
    wide_real lo = 1, hi = 2;
    for (int it = 0; it < 24; ++it) {
        wide_real mid = (lo + hi) / 2;
        if (characteristic_residual(m, mid) < 0)
            lo = mid;
        else
            hi = mid;
    }

    wide_real x = (lo + hi) / 2;
    const wide_real tol = precision;
    for (int it = 0; it < 200; ++it) {
        wide_real v, d;
        detail::characteristic_eval(m, x, v, d);
        if (wide_abs(v) <= tol)
            return x;
        x -= v / d;
    }
    throw std::runtime_error("dominant_root: no convergence for m=" + std::to_string(m) +
                             " at the requested precision");
}

} // namespace mbhalton
