#pragma once

#include "mbhalton/numeration.hpp"
#include "mbhalton/rauzy.hpp"
#include "mbhalton/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbhalton {

/// V(n) = sum_j e_j(n) phi^{-j-1}, summed from the most significant digit down.
inline wide_real vdc_wide(const MBonacciSystem& sys, std::uint64_t n)
{
    Expansion e = encode(sys, n);
    wide_real v = 0;
    for (std::size_t j = e.size(); j-- > 0;)
        if (e.digits[j])
            v += sys.phi_neg_power(j + 1);
    return v;
}

inline double vdc(const MBonacciSystem& sys, std::uint64_t n)
{
    double v = static_cast<double>(vdc_wide(sys, n));
    return v >= 1.0 ? std::nextafter(1.0, 0.0) : v;
}

/// Bases of a beta-adic Halton sequence plus per-base torus offsets used on
/// the rotation side. Offsets default to zero.
struct HaltonConfig
{
    std::vector<MBonacciSystem> systems;
    std::vector<TorusPoint> offsets;

    std::size_t dims() const { return systems.size(); }
};

inline HaltonConfig make_halton_config(std::span<const int> ms, std::uint64_t max_n,
                                       double precision = default_root_precision)
{
    if (ms.empty())
        throw std::invalid_argument("make_halton_config: need at least one base");
    std::set<int> seen;
    HaltonConfig cfg;
    for (int m : ms) {
        if (m < 2)
            throw std::invalid_argument("make_halton_config: every m must be >= 2");
        if (!seen.insert(m).second)
            throw std::invalid_argument("make_halton_config: m values must be pairwise distinct (repeated " +
                                        std::to_string(m) + ")");
        cfg.systems.emplace_back(m, max_n, precision);
        cfg.offsets.push_back(zero_point(static_cast<std::size_t>(m - 1)));
    }
    return cfg;
}

inline std::vector<double> halton(const HaltonConfig& cfg, std::uint64_t n)
{
    std::vector<double> out;
    out.reserve(cfg.systems.size());
    for (const auto& sys : cfg.systems)
        out.push_back(vdc(sys, n));
    return out;
}

/// Conjugated rotation point n (phi^{-2}, ..., phi^{-m}) + offset for every base.
inline TorusPoint halton_rotation_point(const HaltonConfig& cfg, std::uint64_t n)
{
    return rotation_point(cfg.systems, n, cfg.offsets);
}

/// Interval [mu_k / phi^k, (mu_k + phi^r - sum_{i<r} phi^i) / phi^k) that holds
/// V(n) for every n sharing the k lowest digits.
struct CkInterval
{
    std::size_t k = 0;
    int r = 0;
    wide_real mu = 0;
    wide_real left = 0;
    wide_real right = 0;

    wide_real length() const { return right - left; }
    bool contains(wide_real x, wide_real guard = 0) const { return x >= left - guard && x < right + guard; }
};

inline CkInterval interval_for(const MBonacciSystem& sys, std::uint64_t n, std::size_t k)
{
    if (k + 1 >= sys.power_table_size())
        throw std::out_of_range("interval_for: k beyond power table");
    Expansion e = encode(sys, n);
    CkInterval iv;
    iv.k = k;
    iv.r = trailing_ones_before(e, static_cast<long>(k));
    // mu_k = sum_{j<k} e_{k-1-j} phi^j; descend j so the largest terms go first
    for (std::size_t j = k; j-- > 0;)
        if (e.at(static_cast<long>(k - 1 - j)))
            iv.mu += sys.phi_power(j);
    wide_real width = sys.phi_power(iv.r);
    for (int i = 0; i < iv.r; ++i)
        width -= sys.phi_power(i);
    iv.left = iv.mu * sys.phi_neg_power(k);
    iv.right = (iv.mu + width) * sys.phi_neg_power(k);
    return iv;
}

/// The F_k intervals of level k (one per n < F_k), sorted by left endpoint.
inline std::vector<CkInterval> partition_ck(const MBonacciSystem& sys, std::size_t k)
{
    if (k >= sys.terms())
        throw std::out_of_range("partition_ck: F_k beyond basis range");
    const std::uint64_t count = sys.term(k);
    std::vector<CkInterval> out;
    out.reserve(count);
    for (std::uint64_t n = 0; n < count; ++n)
        out.push_back(interval_for(sys, n, k));
    std::sort(out.begin(), out.end(), [](const CkInterval& a, const CkInterval& b) { return a.left < b.left; });
    return out;
}

/// Measure of a level-k subtile with terminal letter i: phi^{-k-i}.
inline wide_real subtile_measure(const MBonacciSystem& sys, const SubtileAddress& a)
{
    return sys.phi_neg_power(a.k + a.letter);
}

/// Exact combinatorial membership of n pi_c(e_1) in a level-k subtile: the k
/// lowest digits of n equal the address digits and the block of ones starting
/// at digit k has length letter-1, which pins the walk's terminal letter.
inline bool membership_oracle(const MBonacciSystem& sys, std::uint64_t n, const SubtileAddress& a)
{
    Expansion e = encode(sys, n);
    for (std::size_t j = 0; j < a.k; ++j)
        if (e.at(static_cast<long>(j)) != a.digits[j])
            return false;
    return 1 + ones_run_from(e, static_cast<long>(a.k)) == a.letter;
}

/// Every level-k address: each admissible k-digit prefix with letters 1..m-r.
inline std::vector<SubtileAddress> level_addresses(const MBonacciSystem& sys, std::size_t k)
{
    if (k >= sys.terms())
        throw std::out_of_range("level_addresses: F_k beyond basis range");
    std::vector<SubtileAddress> out;
    for (std::uint64_t v = 0; v < sys.term(k); ++v) {
        Expansion e = encode(sys, v);
        SubtileAddress a;
        a.m = sys.m();
        a.k = k;
        a.digits.resize(k);
        for (std::size_t j = 0; j < k; ++j)
            a.digits[j] = e.at(static_cast<long>(j));
        a.r = trailing_ones_before(e, static_cast<long>(k));
        for (int i = 1; i <= a.max_letter(); ++i) {
            a.letter = static_cast<Letter>(i);
            out.push_back(a);
        }
    }
    return out;
}

/// Offset in B^M R(1), M = max(k, L) with F_{L-1} <= N-1 < F_L, used to push
/// rotation points off subtile boundaries. The reference point is the lifted
/// cloud point of the first index >= reference_index/2 labelled 1 (an interior
/// sample of R(1)); contracting it M times is done on its exact letter-count
/// vector, B^M l(u_1..u_n), before projecting.
inline constexpr std::size_t default_offset_reference = 4096;

struct OffsetInfo
{
    std::size_t contraction_level = 0;  // M
    std::uint64_t reference_index = 0;
    std::vector<wide_real> lifted;      // unreduced coordinates of the offset
    TorusPoint point;
};

inline OffsetInfo default_offset_info(const MBonacciSystem& sys, std::size_t k, std::uint64_t count,
                                      std::size_t reference = default_offset_reference)
{
    if (k < 1 || count < 1)
        throw std::invalid_argument("default_offset: k and N must be >= 1");
    const int m = sys.m();
    std::size_t level = 0;  // L
    while (level < sys.terms() && sys.term(level) <= count - 1)
        ++level;
    if (level >= sys.terms())
        throw std::out_of_range("default_offset: N beyond basis range");

    OffsetInfo info;
    info.contraction_level = std::max(k, level);

    Word u = fixed_point_prefix(m, reference + 2);
    std::size_t idx = reference / 2;
    while (u[idx] != 1)
        ++idx;
    info.reference_index = idx;
    auto x = abelianization(m, std::span<const Letter>(u.data(), idx));
    for (std::size_t t = 0; t < info.contraction_level; ++t)
        x = apply_incidence(m, x);
    info.lifted = lattice_coords(sys, x);
    info.point = torus_reduce(info.lifted);
    return info;
}

inline TorusPoint default_offset(const MBonacciSystem& sys, std::size_t k, std::uint64_t count)
{
    return default_offset_info(sys, k, count).point;
}

/// Largest level accepted by local_discrepancy unless the caller raises it.
inline constexpr std::size_t default_local_level_cap = 10;

/// delta_k = max over level-k addresses S of |#{n < N : n in S}/N - lambda(S)|.
inline double local_discrepancy(const MBonacciSystem& sys, std::size_t k, std::uint64_t count,
                                std::size_t level_cap = default_local_level_cap)
{
    if (k > level_cap)
        throw std::invalid_argument("local_discrepancy: k=" + std::to_string(k) + " above cap " +
                                    std::to_string(level_cap));
    if (count < 1)
        throw std::invalid_argument("local_discrepancy: N must be >= 1");
    if (k >= sys.terms())
        throw std::out_of_range("local_discrepancy: F_k beyond basis range");
    const int m = sys.m();
    const std::uint64_t prefixes = sys.term(k);
    // bucket (nu_k, letter) -> count; nu_k < F_k enumerates admissible k-digit prefixes
    std::vector<std::uint64_t> hits(prefixes * static_cast<std::uint64_t>(m), 0);
    for (std::uint64_t n = 0; n < count; ++n) {
        Expansion e = encode(sys, n);
        std::uint64_t nu = low_digits_value(sys, e, k);
        int letter = 1 + ones_run_from(e, static_cast<long>(k));
        ++hits[nu * m + (letter - 1)];
    }
    const wide_real inv_n = static_cast<wide_real>(1) / static_cast<wide_real>(count);
    wide_real worst = 0;
    for (std::uint64_t nu = 0; nu < prefixes; ++nu) {
        Expansion e = encode(sys, nu);
        int r = trailing_ones_before(e, static_cast<long>(k));
        for (int i = 1; i <= m - r; ++i) {
            wide_real diff = static_cast<wide_real>(hits[nu * m + (i - 1)]) * inv_n - sys.phi_neg_power(k + i);
            worst = std::max(worst, wide_abs(diff));
        }
    }
    return static_cast<double>(worst);
}

} // namespace mbhalton
