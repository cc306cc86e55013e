#pragma once

#include <cmath>
#include <cstdint>

namespace mbhalton {

// Working type for quantities that must survive products like n * phi^-k with
// n up to ~1e7 and k up to ~60. On x86-64 this is IEEE binary128 (113-bit
// significand); elsewhere we fall back to long double.
#if defined(__SIZEOF_FLOAT128__)
using wide_real = __float128;
#else
using wide_real = long double;
#endif

inline constexpr wide_real wide_abs(wide_real x) { return x < 0 ? -x : x; }

/// Largest integer not exceeding x. Only + - * / on wide_real, so no libquadmath.
inline wide_real wide_floor(wide_real x)
{
    constexpr wide_real two62 = static_cast<wide_real>(std::uint64_t{1} << 62);
    if (wide_abs(x) < two62) {
        auto t = static_cast<std::int64_t>(x);  // truncates toward zero
        auto f = static_cast<wide_real>(t);
        return f > x ? f - 1 : f;
    }
    // beyond 2^112 every value is an integer
    constexpr wide_real two112 = two62 * two62 / static_cast<wide_real>(std::uint64_t{1} << 12);
    if (wide_abs(x) >= two112)
        return x;
    wide_real q = wide_floor(x / two62);
    return q * two62 + wide_floor(x - q * two62);
}

/// x mod 1 in [0,1). A result that rounds to 1.0 is mapped to 0.
inline wide_real wide_frac(wide_real x)
{
    wide_real f = x - wide_floor(x);
    if (f >= 1 || f < 0)
        f = 0;
    return f;
}

/// Same contract as wide_frac, applied after narrowing to double.
inline double frac_to_double(wide_real x)
{
    double d = static_cast<double>(wide_frac(x));
    return d >= 1.0 ? 0.0 : d;
}

inline double frac_double(double x)
{
    double f = x - std::floor(x);
    return (f >= 1.0 || f < 0.0) ? 0.0 : f;
}

} // namespace mbhalton
