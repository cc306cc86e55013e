#pragma once

#include "mbhalton/detail/grid.hpp"
#include "mbhalton/numeration.hpp"
#include "mbhalton/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mbhalton {

// ---------------------------------------------------------------------------
// Words
// ---------------------------------------------------------------------------

inline Word substitute(int m, std::span<const Letter> word)
{
    Word out;
    out.reserve(word.size() * 2);
    for (Letter a : word) {
        if (a < 1 || a > m)
            throw std::invalid_argument("substitute: letter out of alphabet");
        out.push_back(1);
        if (a < m)
            out.push_back(static_cast<Letter>(a + 1));
    }
    return out;
}

/// First `length` letters of the fixed point u = lim sigma_m^n(1).
inline Word fixed_point_prefix(int m, std::size_t length)
{
    require_m(m, "fixed_point_prefix");
    if (length < 1)
        throw std::invalid_argument("fixed_point_prefix: length must be >= 1");
    // sigma(1) starts with 1, so each iterate is a prefix of the next; extending
    // in place reads letter t and appends its image.
    Word u{1};
    u.reserve(length + 2);
    for (std::size_t t = 0; u.size() < length; ++t) {
        if (t == 0) {
            u.push_back(2);  // sigma(1) = 12, the leading 1 is already there
            continue;
        }
        Letter a = u[t];
        u.push_back(1);
        if (a < m)
            u.push_back(static_cast<Letter>(a + 1));
    }
    u.resize(length);
    return u;
}

/// |sigma_m^k(1)| via letter counts: l(sigma(w)) = B l(w).
inline std::uint64_t sigma_power_length(int m, std::size_t k)
{
    require_m(m, "sigma_power_length");
    std::vector<std::int64_t> counts(static_cast<std::size_t>(m), 0);
    counts[0] = 1;
    for (std::size_t t = 0; t < k; ++t)
        counts = apply_incidence(m, counts);
    std::uint64_t total = 0;
    for (auto c : counts)
        total += static_cast<std::uint64_t>(c);
    return total;
}

/// |sigma_m^k(1)| == F_k.
inline bool word_length_check(const MBonacciSystem& sys, std::size_t k)
{
    if (k >= sys.terms())
        throw std::out_of_range("word_length_check: k beyond basis range");
    return sigma_power_length(sys.m(), k) == sys.term(k);
}

// ---------------------------------------------------------------------------
// Prefix-suffix graph
// ---------------------------------------------------------------------------

/// Edge from -> to labelled by a prefix p with sigma(to) = p from s.
/// Prefixes in this family are the empty word or the single letter 1.
struct PrefixSuffixEdge
{
    Letter from = 0;
    Letter to = 0;
    int prefix_len = 0;

    bool operator==(const PrefixSuffixEdge&) const = default;
};

inline std::vector<PrefixSuffixEdge> prefix_suffix_edges(int m)
{
    auto images = substitution_images(m);
    std::vector<PrefixSuffixEdge> edges;
    for (int j = 1; j <= m; ++j) {
        const Word& img = images[j - 1];
        for (std::size_t pos = 0; pos < img.size(); ++pos)
            edges.push_back({img[pos], static_cast<Letter>(j), static_cast<int>(pos)});
    }
    return edges;
}

/// A walk i_0 -p_0-> i_1 -> ... -> i_k with prefix lengths p_t in {0,1}.
struct GraphWalk
{
    Letter start = 0;
    Letter end = 0;
    std::vector<Digit> prefixes;
};

/// Every walk of length k in the prefix-suffix graph.
inline std::vector<GraphWalk> walks_of_length(int m, std::size_t k)
{
    auto edges = prefix_suffix_edges(m);
    std::vector<GraphWalk> cur;
    for (int i = 1; i <= m; ++i)
        cur.push_back({static_cast<Letter>(i), static_cast<Letter>(i), {}});
    for (std::size_t step = 0; step < k; ++step) {
        std::vector<GraphWalk> next;
        for (const auto& w : cur)
            for (const auto& e : edges)
                if (e.from == w.end) {
                    GraphWalk x = w;
                    x.end = e.to;
                    x.prefixes.push_back(static_cast<Digit>(e.prefix_len));
                    next.push_back(std::move(x));
                }
        cur = std::move(next);
    }
    return cur;
}

/// Integer vector l(sigma^{k-1}(p_{k-1}) ... sigma(p_1) p_0) for p_t = 1^{digits[t]}.
inline std::vector<std::int64_t> walk_abelianization(int m, std::span<const Digit> digits)
{
    std::vector<std::int64_t> total(static_cast<std::size_t>(m), 0);
    std::vector<std::int64_t> power(static_cast<std::size_t>(m), 0);  // B^t e_1
    power[0] = 1;
    for (std::size_t t = 0; t < digits.size(); ++t) {
        if (digits[t])
            for (int i = 0; i < m; ++i)
                total[i] += power[i];
        if (t + 1 < digits.size())
            power = apply_incidence(m, power);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Point clouds
// ---------------------------------------------------------------------------

/// Points n = 0..depth of the projected fixed-point prefixes pi_c l(u_1 ... u_n),
/// labelled by u_{n+1}. Both the lattice-coordinate lift (the Rauzy fractal
/// itself) and its reduction mod Z^{m-1} are stored, flat, (m-1) per point.
struct FractalCloud
{
    int m = 0;
    std::size_t depth = 0;
    std::vector<Letter> labels;
    std::vector<double> torus;
    std::vector<double> lifted;

    std::size_t dims() const { return static_cast<std::size_t>(m - 1); }
    std::size_t size() const { return labels.size(); }

    std::span<const double> torus_coords(std::size_t n) const { return {torus.data() + n * dims(), dims()}; }
    std::span<const double> lifted_coords(std::size_t n) const { return {lifted.data() + n * dims(), dims()}; }
    TorusPoint point(std::size_t n) const
    {
        auto c = torus_coords(n);
        return TorusPoint{{c.begin(), c.end()}};
    }
};

inline constexpr std::size_t default_cloud_budget = 50'000'000;

/// Builds the labelled cloud from the first depth+1 letters of the fixed point.
/// Letter counts are exact integers, so each lifted coordinate
/// n phi^{-i} - |u_1..u_n|_i is evaluated directly at wide precision.
inline FractalCloud build_cloud(const MBonacciSystem& sys, std::size_t depth,
                                std::size_t max_points = default_cloud_budget)
{
    if (depth < 1)
        throw std::invalid_argument("build_cloud: depth must be >= 1");
    if (depth + 1 > max_points)
        throw std::length_error("build_cloud: depth " + std::to_string(depth) + " exceeds memory budget of " +
                                std::to_string(max_points) + " points");
    const int m = sys.m();
    const std::size_t d = static_cast<std::size_t>(m - 1);
    FractalCloud cloud;
    cloud.m = m;
    cloud.depth = depth;
    cloud.labels = fixed_point_prefix(m, depth + 1);
    cloud.torus.resize((depth + 1) * d);
    cloud.lifted.resize((depth + 1) * d);

    std::vector<std::int64_t> counts(static_cast<std::size_t>(m), 0);
    for (std::size_t n = 0; n <= depth; ++n) {
        const auto wn = static_cast<wide_real>(n);
        for (std::size_t i = 0; i < d; ++i) {
            wide_real c = wn * sys.phi_neg_power(i + 2) - static_cast<wide_real>(counts[i + 1]);
            cloud.lifted[n * d + i] = static_cast<double>(c);
            cloud.torus[n * d + i] = frac_to_double(c);
        }
        ++counts[cloud.labels[n] - 1];
    }
    return cloud;
}

// ---------------------------------------------------------------------------
// Level-k subtiles
// ---------------------------------------------------------------------------

/// Level-k subtile B^k R(letter) + pi_c l(sigma^{k-1}(p_{k-1}) ... p_0), addressed
/// by the walk's prefix lengths (= the k lowest digits) and its terminal letter.
/// r is the length of the block of ones ending the digit prefix; the walk can
/// only end in letters 1..m-r.
struct SubtileAddress
{
    int m = 0;
    std::size_t k = 0;
    std::vector<Digit> digits;
    int r = 0;
    Letter letter = 1;

    int max_letter() const { return m - r; }
    bool operator==(const SubtileAddress&) const = default;
};

/// Address of the level-k subtile whose lattice translate contains n pi_c(e_1).
/// The terminal letter of n's walk is 1 + (length of the block of ones starting at digit k).
inline SubtileAddress subtile_of(const MBonacciSystem& sys, std::uint64_t n, std::size_t k)
{
    Expansion e = encode(sys, n);
    SubtileAddress a;
    a.m = sys.m();
    a.k = k;
    a.digits.resize(k);
    for (std::size_t j = 0; j < k; ++j)
        a.digits[j] = e.at(static_cast<long>(j));
    a.r = trailing_ones_before(e, static_cast<long>(k));
    a.letter = static_cast<Letter>(1 + ones_run_from(e, static_cast<long>(k)));
    return a;
}

/// nu_k = sum_{j<k} e_j F_j for the address digits.
inline std::uint64_t address_offset(const MBonacciSystem& sys, const SubtileAddress& a)
{
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < a.digits.size(); ++j)
        if (a.digits[j])
            v += sys.term(j);
    return v;
}

/// Lifted translation vector of the subtile with the given digit prefix.
inline std::vector<wide_real> subtile_translation(const MBonacciSystem& sys, std::span<const Digit> digits)
{
    auto x = walk_abelianization(sys.m(), digits);
    return lattice_coords(sys, x);
}

// ---------------------------------------------------------------------------
// Grid checks
// ---------------------------------------------------------------------------

/// Default density heuristic: depth >= factor * side^{-(m-1)}.
inline constexpr double default_density_factor = 100.0;

inline void require_density(const FractalCloud& cloud, double side, double factor, const char* where)
{
    double needed = factor * std::pow(side, -static_cast<double>(cloud.dims()));
    if (static_cast<double>(cloud.depth) < needed)
        throw std::invalid_argument(std::string(where) + ": insufficient cloud density (depth " +
                                    std::to_string(cloud.depth) + " < " + std::to_string(needed) + ")");
}

struct SetEquationReport
{
    std::size_t k = 0;
    double resolution = 0;
    std::size_t walks = 0;
    std::size_t lhs_cells = 0;
    std::size_t rhs_cells = 0;
    std::size_t symmetric_difference = 0;
    double ratio = 0;  // symmetric_difference / |lhs union rhs|, summed over letters
};

/// Rasterised check of the k-fold set equation
///   R(i) = U_{walks i=i_0 -> ... -> i_k} B^k R(i_k) + pi_c l(sigma^{k-1}(p_{k-1}) ... p_0)
/// on lifted coordinates. Each letter's subcloud and the union of contracted,
/// translated subclouds are rasterised at the given cell side and compared.
inline SetEquationReport set_equation_check(const MBonacciSystem& sys, const FractalCloud& cloud, std::size_t k,
                                            double resolution, double density_factor = default_density_factor)
{
    if (cloud.m != sys.m())
        throw std::invalid_argument("set_equation_check: cloud/system mismatch");
    require_density(cloud, resolution, density_factor, "set_equation_check");
    const int m = sys.m();
    const std::size_t d = cloud.dims();
    detail::CellPacker grid(d, resolution);

    std::vector<std::unordered_set<std::uint64_t>> lhs(m), rhs(m);
    for (std::size_t n = 0; n < cloud.size(); ++n)
        lhs[cloud.labels[n] - 1].insert(grid.key(cloud.lifted_coords(n)));

    // A^k in lattice coordinates
    const auto a = contraction_matrix(sys);
    Matrix<wide_real> ak(d, d);
    for (std::size_t i = 0; i < d; ++i)
        ak(i, i) = 1;
    for (std::size_t t = 0; t < k; ++t) {
        Matrix<wide_real> next(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t l = 0; l < d; ++l)
                    next(i, j) += a(i, l) * ak(l, j);
        ak = next;
    }
    std::vector<double> akd(d * d);
    for (std::size_t i = 0; i < d * d; ++i)
        akd[i] = static_cast<double>(ak.data[i]);

    auto walks = walks_of_length(m, k);
    struct Shift
    {
        Letter start;
        std::vector<double> t;
    };
    std::vector<std::vector<Shift>> by_end(m);
    for (const auto& w : walks) {
        auto t = subtile_translation(sys, w.prefixes);
        by_end[w.end - 1].push_back({w.start, std::vector<double>(t.begin(), t.end())});
    }

    std::vector<double> img(d);
    for (std::size_t n = 0; n < cloud.size(); ++n) {
        auto x = cloud.lifted_coords(n);
        for (const auto& s : by_end[cloud.labels[n] - 1]) {
            for (std::size_t i = 0; i < d; ++i) {
                double v = s.t[i];
                for (std::size_t j = 0; j < d; ++j)
                    v += akd[i * d + j] * x[j];
                img[i] = v;
            }
            rhs[s.start - 1].insert(grid.key(img));
        }
    }

    SetEquationReport rep;
    rep.k = k;
    rep.resolution = resolution;
    rep.walks = walks.size();
    std::size_t uni = 0;
    for (int i = 0; i < m; ++i) {
        rep.lhs_cells += lhs[i].size();
        rep.rhs_cells += rhs[i].size();
        std::size_t common = 0;
        for (auto key : lhs[i])
            common += rhs[i].count(key);
        rep.symmetric_difference += lhs[i].size() + rhs[i].size() - 2 * common;
        uni += lhs[i].size() + rhs[i].size() - common;
    }
    rep.ratio = uni ? static_cast<double>(rep.symmetric_difference) / static_cast<double>(uni) : 0.0;
    return rep;
}

struct TilingReport
{
    double resolution = 0;
    std::size_t cells = 0;          // torus cells
    std::size_t covered = 0;        // torus cells holding at least one point
    std::size_t multi_letter = 0;   // torus cells holding points of >= 2 letters
    double coverage = 0;            // covered / cells
    double overlap_fraction = 0;    // multi_letter / cells
    double lifted_measure = 0;      // (# occupied lifted cells) * side^{m-1}
};

/// Fundamental-domain check at grid resolution: the reduced cloud must meet
/// every torus cell; subtile overlaps are reported as the share of cells seen
/// by more than one letter.
inline TilingReport tiling_check(const FractalCloud& cloud, double resolution,
                                 double density_factor = default_density_factor)
{
    require_density(cloud, resolution, density_factor, "tiling_check");
    if (cloud.m > 32)
        throw std::invalid_argument("tiling_check: m > 32 unsupported");
    const std::size_t d = cloud.dims();
    const std::size_t side = detail::cells_per_axis(resolution);
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i)
        total *= side;

    std::vector<std::uint32_t> mask(total, 0);
    for (std::size_t n = 0; n < cloud.size(); ++n)
        mask[detail::torus_cell(cloud.torus_coords(n), side)] |= 1u << (cloud.labels[n] - 1);

    TilingReport rep;
    rep.resolution = resolution;
    rep.cells = total;
    for (auto b : mask) {
        if (b)
            ++rep.covered;
        if (b & (b - 1))
            ++rep.multi_letter;
    }
    rep.coverage = static_cast<double>(rep.covered) / static_cast<double>(total);
    rep.overlap_fraction = static_cast<double>(rep.multi_letter) / static_cast<double>(total);

    detail::CellPacker grid(d, resolution);
    std::unordered_set<std::uint64_t> occupied;
    for (std::size_t n = 0; n < cloud.size(); ++n)
        occupied.insert(grid.key(cloud.lifted_coords(n)));
    rep.lifted_measure = static_cast<double>(occupied.size()) * std::pow(resolution, static_cast<double>(d));
    return rep;
}

} // namespace mbhalton
