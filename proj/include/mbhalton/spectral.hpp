#pragma once

#include "mbhalton/characteristic.hpp"
#include "mbhalton/numeration.hpp"
#include "mbhalton/wide.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbhalton {

/// Letters of the alphabet {1, ..., m}.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

/// Dense row-major matrix, just enough for m x m work.
template <typename T>
struct Matrix
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T{}) {}

    T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool operator==(const Matrix&) const = default;
};

using IntMatrix = Matrix<std::int64_t>;

inline void require_m(int m, const char* where)
{
    if (m < 2)
        throw std::invalid_argument(std::string(where) + ": m must be >= 2, got " + std::to_string(m));
}

/// sigma_m(i) = 1 (i+1) for i < m, sigma_m(m) = 1. images[i-1] is the image of letter i.
inline std::vector<Word> substitution_images(int m)
{
    require_m(m, "substitution_images");
    std::vector<Word> images(static_cast<std::size_t>(m));
    for (int i = 1; i < m; ++i)
        images[i - 1] = {Letter{1}, static_cast<Letter>(i + 1)};
    images[m - 1] = {Letter{1}};
    return images;
}

/// Letter counts (|w|_1, ..., |w|_m).
inline std::vector<std::int64_t> abelianization(int m, std::span<const Letter> word)
{
    std::vector<std::int64_t> counts(static_cast<std::size_t>(m), 0);
    for (Letter a : word) {
        if (a < 1 || a > m)
            throw std::invalid_argument("abelianization: letter out of alphabet");
        ++counts[a - 1];
    }
    return counts;
}

/// B(i,j) = |sigma_m(j)|_i, built from the images.
inline IntMatrix incidence_matrix(int m)
{
    auto images = substitution_images(m);
    IntMatrix b(m, m);
    for (int j = 0; j < m; ++j) {
        auto col = abelianization(m, images[j]);
        for (int i = 0; i < m; ++i)
            b(i, j) = col[i];
    }
    return b;
}

struct SubstitutionData
{
    int m = 0;
    std::vector<Word> images;
    IntMatrix incidence;
};

inline SubstitutionData make_substitution(int m)
{
    return SubstitutionData{m, substitution_images(m), incidence_matrix(m)};
}

/// y = B x over the integers (overflow-checked).
inline std::vector<std::int64_t> apply_incidence(int m, std::span<const std::int64_t> x)
{
    if (static_cast<int>(x.size()) != m)
        throw std::invalid_argument("apply_incidence: vector length must equal m");
    // B e_1 = e_1 + e_2, B e_j = e_1 + e_{j+1} (j < m), B e_m = e_1
    std::vector<std::int64_t> y(static_cast<std::size_t>(m), 0);
    std::int64_t total = 0;
    for (int j = 0; j < m; ++j)
        if (__builtin_add_overflow(total, x[j], &total))
            throw std::overflow_error("apply_incidence: overflow");
    y[0] = total;
    for (int j = 0; j + 1 < m; ++j)
        y[j + 1] = x[j];
    return y;
}

/// Dominant eigendata of B_m. u is sum-normalized (u_i = phi^{-i}); v is scaled
/// so that v . u = 1. rotation_vector = (phi^{-2}, ..., phi^{-m}).
struct SpectralData
{
    int m = 0;
    wide_real phi = 0;
    std::vector<wide_real> u;
    std::vector<wide_real> v;
    std::vector<wide_real> rotation_vector;
};

inline SpectralData spectral_data(int m, double precision = default_root_precision)
{
    require_m(m, "spectral_data");
    SpectralData s;
    s.m = m;
    s.phi = dominant_root(m, precision);
    s.u.resize(m);
    wide_real p = 1;
    for (int i = 0; i < m; ++i) {
        p /= s.phi;
        s.u[i] = p;
    }
    // v^T B = phi v^T  <=>  v_m = v_1 / phi,  v_j = (v_1 + v_{j+1}) / phi
    s.v.assign(m, 0);
    s.v[0] = 1;
    s.v[m - 1] = s.v[0] / s.phi;
    for (int j = m - 2; j >= 1; --j)
        s.v[j] = (s.v[0] + s.v[j + 1]) / s.phi;
    wide_real dot = 0;
    for (int i = 0; i < m; ++i)
        dot += s.v[i] * s.u[i];
    for (auto& x : s.v)
        x /= dot;
    s.rotation_vector.assign(s.u.begin() + 1, s.u.end());
    return s;
}

/// Coordinates of pi_c(x) in the lattice basis b_i = pi_c(e_1 - e_i), i = 2..m.
///
/// From pi_c(e_1) = sum_{i>=2} phi^{-i} b_i and pi_c(e_i) = pi_c(e_1) - b_i,
/// linearity gives pi_c(x) = (sum_j x_j) pi_c(e_1) - sum_{i>=2} x_i b_i, so the
/// coefficient of b_i is (sum_j x_j) phi^{-i} - x_i.
inline std::vector<wide_real> lattice_coords(const MBonacciSystem& sys, std::span<const std::int64_t> x)
{
    const int m = sys.m();
    if (static_cast<int>(x.size()) != m)
        throw std::invalid_argument("lattice_coords: vector length must equal m");
    wide_real total = 0;
    for (auto xi : x)
        total += static_cast<wide_real>(xi);
    std::vector<wide_real> c(m - 1);
    for (int i = 2; i <= m; ++i)
        c[i - 2] = total * sys.phi_neg_power(i) - static_cast<wide_real>(x[i - 1]);
    return c;
}

/// Point of the torus R^{d} / Z^{d}, every coordinate in [0,1).
struct TorusPoint
{
    std::vector<double> coords;

    std::size_t dims() const { return coords.size(); }
    bool operator==(const TorusPoint&) const = default;
};

inline TorusPoint torus_reduce(std::span<const wide_real> c)
{
    TorusPoint p;
    p.coords.reserve(c.size());
    for (auto x : c)
        p.coords.push_back(frac_to_double(x));
    return p;
}

inline TorusPoint torus_reduce(std::span<const double> c)
{
    TorusPoint p;
    p.coords.reserve(c.size());
    for (auto x : c)
        p.coords.push_back(frac_double(x));
    return p;
}

/// Sup-norm distance on the torus.
inline double torus_distance(const TorusPoint& a, const TorusPoint& b)
{
    if (a.dims() != b.dims())
        throw std::invalid_argument("torus_distance: dimension mismatch");
    double d = 0;
    for (std::size_t i = 0; i < a.dims(); ++i) {
        double t = std::fabs(a.coords[i] - b.coords[i]);
        d = std::max(d, std::min(t, 1.0 - t));
    }
    return d;
}

inline TorusPoint zero_point(std::size_t dims) { return TorusPoint{std::vector<double>(dims, 0.0)}; }

/// Concatenation over systems of frac(n (phi^{-2}, ..., phi^{-m}) + offset).
/// Each coordinate is formed directly from n in wide precision.
inline TorusPoint rotation_point(std::span<const MBonacciSystem> systems, std::uint64_t n,
                                 std::span<const TorusPoint> offsets)
{
    if (!offsets.empty() && offsets.size() != systems.size())
        throw std::invalid_argument("rotation_point: offsets must match systems");
    TorusPoint out;
    const auto wn = static_cast<wide_real>(n);
    for (std::size_t s = 0; s < systems.size(); ++s) {
        const auto& sys = systems[s];
        const int m = sys.m();
        if (!offsets.empty() && offsets[s].dims() != static_cast<std::size_t>(m - 1))
            throw std::invalid_argument("rotation_point: offset dimension mismatch");
        for (int i = 2; i <= m; ++i) {
            wide_real x = wn * sys.phi_neg_power(i);
            if (!offsets.empty())
                x += static_cast<wide_real>(offsets[s].coords[i - 2]);
            out.coords.push_back(frac_to_double(x));
        }
    }
    return out;
}

inline TorusPoint rotation_point(const MBonacciSystem& sys, std::uint64_t n)
{
    return rotation_point(std::span<const MBonacciSystem>(&sys, 1), n, {});
}

/// Matrix of B restricted to v^perp, in lattice coordinates: column i holds
/// lattice_coords(B (e_1 - e_{i+2})). Acts on unreduced coordinates only,
/// since B does not preserve the lattice.
inline Matrix<wide_real> contraction_matrix(const MBonacciSystem& sys)
{
    const int m = sys.m();
    Matrix<wide_real> a(m - 1, m - 1);
    for (int i = 2; i <= m; ++i) {
        std::vector<std::int64_t> x(m, 0);
        x[0] = 1;
        x[i - 1] = -1;
        auto bx = apply_incidence(m, x);
        auto c = lattice_coords(sys, bx);
        for (int r = 0; r < m - 1; ++r)
            a(r, i - 2) = c[r];
    }
    return a;
}

inline std::vector<wide_real> apply(const Matrix<wide_real>& a, std::span<const wide_real> x)
{
    std::vector<wide_real> y(a.rows, 0);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            y[i] += a(i, j) * x[j];
    return y;
}

} // namespace mbhalton
