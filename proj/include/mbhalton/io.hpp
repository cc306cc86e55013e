#pragma once

#include "mbhalton/discrepancy.hpp"
#include "mbhalton/rauzy.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mbhalton::io {

/// Fixed-point text with `digits` decimals, trailing zeros (and a bare point)
/// removed; negative zero prints as "0". Deterministic for a given input.
inline std::string format_fixed(double x, int digits)
{
    if (digits < 0 || digits > 30)
        throw std::invalid_argument("format_fixed: digits must be in [0, 30]");
    char buf[96];
    int len = std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    std::string s(buf, static_cast<std::size_t>(len));
    if (s.find('.') != std::string::npos) {
        while (!s.empty() && s.back() == '0')
            s.pop_back();
        if (!s.empty() && s.back() == '.')
            s.pop_back();
    }
    if (s == "-0")
        s = "0";
    return s;
}

/// Cloud as CSV: header `n,label,c1,...,c(m-1)`, one point per line.
inline void write_cloud_csv(std::ostream& out, const FractalCloud& cloud, int digits, bool lifted = false)
{
    out << "n,label";
    for (std::size_t i = 1; i <= cloud.dims(); ++i)
        out << ",c" << i;
    out << '\n';
    for (std::size_t n = 0; n < cloud.size(); ++n) {
        out << n << ',' << int(cloud.labels[n]);
        auto c = lifted ? cloud.lifted_coords(n) : cloud.torus_coords(n);
        for (double x : c)
            out << ',' << format_fixed(x, digits);
        out << '\n';
    }
}

using Rgb = std::array<unsigned char, 3>;

inline Rgb letter_color(int letter)
{
    static constexpr std::array<Rgb, 8> palette{{{{228, 26, 28}},
                                                 {{55, 126, 184}},
                                                 {{77, 175, 74}},
                                                 {{152, 78, 163}},
                                                 {{255, 127, 0}},
                                                 {{166, 86, 40}},
                                                 {{247, 129, 191}},
                                                 {{153, 153, 153}}}};
    return palette[static_cast<std::size_t>(letter - 1) % palette.size()];
}

/// Binary PPM (P6) render of a cloud, one colour per letter, each pixel painted
/// with its most frequent letter (ties to the smaller letter).
/// m = 3: width x width image of [0,1)^2 (torus) or of the lifted bounding box.
/// m = 2: a 1-D strip of `width` columns and height width/8.
inline void write_cloud_ppm(std::ostream& out, const FractalCloud& cloud, int width, bool lifted = false)
{
    if (cloud.m != 2 && cloud.m != 3)
        throw std::invalid_argument("write_cloud_ppm: only m = 2 and m = 3 can be rendered");
    if (width < 8 || width > 8192)
        throw std::invalid_argument("write_cloud_ppm: width must be in [8, 8192]");
    const std::size_t d = cloud.dims();
    std::vector<double> lo(d, 0.0), hi(d, 1.0);
    if (lifted) {
        for (std::size_t i = 0; i < d; ++i) {
            lo[i] = hi[i] = cloud.lifted[i];
        }
        for (std::size_t n = 0; n < cloud.size(); ++n)
            for (std::size_t i = 0; i < d; ++i) {
                lo[i] = std::min(lo[i], cloud.lifted[n * d + i]);
                hi[i] = std::max(hi[i], cloud.lifted[n * d + i]);
            }
        // square aspect, tiny margin so the maximum lands inside
        double span = 0;
        for (std::size_t i = 0; i < d; ++i)
            span = std::max(span, hi[i] - lo[i]);
        span *= 1.0 + 1e-9;
        for (std::size_t i = 0; i < d; ++i)
            hi[i] = lo[i] + span;
    }
    const int w = width;
    const int h = cloud.m == 3 ? width : std::max(1, width / 8);
    const int m = cloud.m;
    std::vector<std::uint32_t> votes(static_cast<std::size_t>(w) * (cloud.m == 3 ? h : 1) * m, 0);
    for (std::size_t n = 0; n < cloud.size(); ++n) {
        auto c = lifted ? cloud.lifted_coords(n) : cloud.torus_coords(n);
        auto px = [&](std::size_t i, int extent) {
            int v = static_cast<int>((c[i] - lo[i]) / (hi[i] - lo[i]) * extent);
            return std::clamp(v, 0, extent - 1);
        };
        int x = px(0, w);
        int y = cloud.m == 3 ? (h - 1 - px(1, h)) : 0;
        ++votes[(static_cast<std::size_t>(y) * w + x) * m + (cloud.labels[n] - 1)];
    }
    out << "P6\n" << w << ' ' << h << "\n255\n";
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::size_t cell = (static_cast<std::size_t>(cloud.m == 3 ? y : 0) * w + x) * m;
            int best = 0;
            std::uint32_t best_votes = 0;
            for (int l = 0; l < m; ++l)
                if (votes[cell + l] > best_votes) {
                    best_votes = votes[cell + l];
                    best = l + 1;
                }
            Rgb rgb = best ? letter_color(best) : Rgb{{255, 255, 255}};
            out.write(reinterpret_cast<const char*>(rgb.data()), 3);
        }
}

/// Reads points from CSV with header `x1,...,xs` (one point per line).
inline PointSet read_points_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("read_points_csv: missing header");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    std::size_t dims = 1;
    for (char ch : line)
        dims += ch == ',';
    {
        std::istringstream hs(line);
        std::string name;
        std::size_t i = 1;
        while (std::getline(hs, name, ',')) {
            if (name != "x" + std::to_string(i))
                throw std::invalid_argument("read_points_csv: header must be x1,...,xs");
            ++i;
        }
    }
    PointSet ps;
    ps.dims = dims;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::size_t fields = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p <= end) {
            const char* comma = std::find(p, end, ',');
            double v = 0;
            auto [ptr, ec] = std::from_chars(p, comma, v);
            if (ec != std::errc() || ptr != comma)
                throw std::invalid_argument("read_points_csv: bad number on line " + std::to_string(lineno));
            ps.coords.push_back(v);
            ++fields;
            p = comma + 1;
            if (comma == end)
                break;
        }
        if (fields != dims)
            throw std::invalid_argument("read_points_csv: wrong field count on line " + std::to_string(lineno));
    }
    if (ps.size() == 0)
        throw std::invalid_argument("read_points_csv: no points");
    return ps;
}

} // namespace mbhalton::io
