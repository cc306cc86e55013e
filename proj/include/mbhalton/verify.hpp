#pragma once

// Invariant suite shared by `mbhalton verify` and the acceptance test binary.
// Every check has a quick scale (seconds) and a full scale with the sizes,
// tolerances and time limits of the acceptance criteria.

#include "mbhalton/discrepancy.hpp"
#include "mbhalton/numeration.hpp"
#include "mbhalton/rauzy.hpp"
#include "mbhalton/rotation.hpp"
#include "mbhalton/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mbhalton::verify {

enum class Scale
{
    quick,
    full,
};

struct CheckResult
{
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

namespace detail {

class Stopwatch
{
  public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

  private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

inline std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// pi_c(x) = x - (v.x)/(v.u) u in ambient coordinates.
inline std::vector<long double> ambient_projection(const SpectralData& sp, const std::vector<long double>& x)
{
    long double vx = 0, vu = 0;
    for (int i = 0; i < sp.m; ++i) {
        vx += static_cast<long double>(sp.v[i]) * x[i];
        vu += static_cast<long double>(sp.v[i] * sp.u[i]);
    }
    std::vector<long double> y(x);
    for (int i = 0; i < sp.m; ++i)
        y[i] -= vx / vu * static_cast<long double>(sp.u[i]);
    return y;
}

inline std::vector<long double> unit(int m, int i)
{
    std::vector<long double> e(m, 0);
    e[i - 1] = 1;
    return e;
}

} // namespace detail

/// Direct O(N^{s+1}) star discrepancy: every corner of the grid built from
/// all coordinate values of all axes (plus 1), points counted one by one.
inline double naive_star_discrepancy(const PointSet& ps)
{
    const std::size_t s = ps.dims, n = ps.size();
    std::vector<double> values(ps.coords);
    values.push_back(1.0);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<std::size_t> pick(s, 0);
    double best = 0;
    while (true) {
        double vol = 1;
        for (std::size_t j = 0; j < s; ++j)
            vol *= values[pick[j]];
        std::size_t open = 0, closed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool o = true, c = true;
            for (std::size_t j = 0; j < s; ++j) {
                double x = ps.coords[i * s + j];
                o = o && x < values[pick[j]];
                c = c && x <= values[pick[j]];
            }
            open += o;
            closed += c;
        }
        best = std::max({best, vol - double(open) / double(n), double(closed) / double(n) - vol});
        std::size_t j = 0;
        while (j < s && ++pick[j] == values.size())
            pick[j++] = 0;
        if (j == s)
            break;
    }
    return best;
}

/// 1. decode(encode(n)) == n and encode(n) admissible, n < 10^6, m = 2..6.
inline CheckResult check_roundtrip(Scale scale)
{
    detail::Stopwatch sw;
    const std::uint64_t limit = scale == Scale::full ? 1'000'000 : 100'000;
    std::uint64_t bad = 0, inadmissible = 0;
    for (int m = 2; m <= 6; ++m) {
        MBonacciSystem sys(m, limit);
        for (std::uint64_t n = 0; n < limit; ++n) {
            Expansion e = encode(sys, n);
            if (!is_admissible(m, e.digits))
                ++inadmissible;
            else if (decode(sys, e) != n)
                ++bad;
        }
    }
    double t = sw.seconds();
    bool ok = bad == 0 && inadmissible == 0 && t <= 30.0;
    return {1, "numeration roundtrip", ok,
            "n<" + std::to_string(limit) + " m=2..6 mismatches=" + std::to_string(bad) +
                " inadmissible=" + std::to_string(inadmissible) + " (limit 30s)",
            t};
}

/// 2. F_k = |sigma_m^k(1)| for k <= 25, m = 2..6, via letter counts, plus a
/// literal word expansion for k <= 16.
inline CheckResult check_word_lengths(Scale scale)
{
    detail::Stopwatch sw;
    const std::size_t literal_k = scale == Scale::full ? 16 : 12;
    int failures = 0;
    for (int m = 2; m <= 6; ++m) {
        MBonacciSystem sys(m, std::uint64_t{1} << 30);
        for (std::size_t k = 0; k <= 25; ++k)
            failures += !word_length_check(sys, k);
        Word w{1};
        for (std::size_t k = 0; k <= literal_k; ++k) {
            failures += w.size() != sys.term(k);
            w = substitute(m, w);
        }
    }
    return {2, "word length F_k = |sigma^k(1)|", failures == 0, "k<=25 m=2..6 failures=" + std::to_string(failures),
            sw.seconds()};
}

/// 3. |sum_{i=1}^m phi^{-i} - 1| <= 1e-12 in double arithmetic.
inline CheckResult check_characteristic(Scale)
{
    detail::Stopwatch sw;
    double worst = 0;
    for (int m = 2; m <= 6; ++m) {
        double phi = static_cast<double>(dominant_root(m));
        double s = 0;
        for (int i = 1; i <= m; ++i)
            s += std::pow(phi, -i);
        worst = std::max(worst, std::fabs(s - 1.0));
    }
    return {3, "characteristic identity", worst <= 1e-12, "max residual " + detail::fmt(worst), sw.seconds()};
}

/// 4. Rotation conjugacy: reduce(lattice_coords(n e_1)) vs rotation_point(n),
/// n <= 10^4, within 1e-9; the explicit identity for pi_c(e_1) and the lattice
/// coordinate formula are checked in ambient space to 1e-10.
inline CheckResult check_conjugacy(Scale scale)
{
    detail::Stopwatch sw;
    const std::uint64_t limit = scale == Scale::full ? 10'000 : 2'000;
    double worst_torus = 0, worst_ambient = 0;
    std::mt19937_64 rng(20161);
    for (int m = 2; m <= 6; ++m) {
        MBonacciSystem sys(m, 1'000'000);
        for (std::uint64_t n = 0; n <= limit; ++n) {
            std::vector<std::int64_t> x(m, 0);
            x[0] = static_cast<std::int64_t>(n);
            auto a = torus_reduce(lattice_coords(sys, x));
            worst_torus = std::max(worst_torus, torus_distance(a, rotation_point(sys, n)));
        }
        auto sp = spectral_data(m);
        auto pe1 = detail::ambient_projection(sp, detail::unit(m, 1));
        std::vector<long double> rhs(m, 0);
        std::vector<std::vector<long double>> basis;  // b_i = pi_c(e_1 - e_i)
        for (int i = 2; i <= m; ++i) {
            auto d = detail::unit(m, 1);
            d[i - 1] -= 1;
            basis.push_back(detail::ambient_projection(sp, d));
            for (int j = 0; j < m; ++j)
                rhs[j] += basis.back()[j] * static_cast<long double>(sys.phi_neg_power(i));
        }
        for (int j = 0; j < m; ++j)
            worst_ambient = std::max(worst_ambient, static_cast<double>(std::fabs(pe1[j] - rhs[j])));
        // lattice_coords reproduces pi_c(x) for random integer vectors
        std::uniform_int_distribution<std::int64_t> coef(-50, 50);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<std::int64_t> x(m);
            std::vector<long double> xl(m);
            for (int j = 0; j < m; ++j)
                xl[j] = static_cast<long double>(x[j] = coef(rng));
            auto c = lattice_coords(sys, x);
            auto direct = detail::ambient_projection(sp, xl);
            for (int j = 0; j < m; ++j) {
                long double rec = 0;
                for (int i = 0; i < m - 1; ++i)
                    rec += static_cast<long double>(c[i]) * basis[i][j];
                worst_ambient = std::max(worst_ambient, static_cast<double>(std::fabs(rec - direct[j])));
            }
        }
    }
    bool ok = worst_torus <= 1e-9 && worst_ambient <= 1e-10;
    return {4, "rotation conjugacy", ok,
            "torus " + detail::fmt(worst_torus) + " (<=1e-9), ambient " + detail::fmt(worst_ambient) + " (<=1e-10)",
            sw.seconds()};
}

/// 5. C_k is a partition of [0,1) into F_k intervals, m = 2,3,4, k <= 12.
inline CheckResult check_partition(Scale)
{
    detail::Stopwatch sw;
    int failures = 0;
    double worst_gap = 0, worst_total = 0;
    for (int m = 2; m <= 4; ++m) {
        MBonacciSystem sys(m, 100'000);
        for (std::size_t k = 0; k <= 12; ++k) {
            auto part = partition_ck(sys, k);
            failures += part.size() != sys.term(k);
            wide_real total = 0, prev = 0;
            for (const auto& iv : part) {
                failures += !(iv.left < iv.right);
                worst_gap = std::max(worst_gap, static_cast<double>(wide_abs(iv.left - prev)));
                prev = iv.right;
                total += iv.length();
            }
            worst_gap = std::max(worst_gap, static_cast<double>(wide_abs(prev - 1)));
            worst_total = std::max(worst_total, static_cast<double>(wide_abs(total - 1)));
        }
    }
    bool ok = failures == 0 && worst_gap <= 1e-10 && worst_total <= 1e-10;
    return {5, "interval partition C_k", ok,
            "count failures=" + std::to_string(failures) + " gap " + detail::fmt(worst_gap) + " total " +
                detail::fmt(worst_total),
            sw.seconds()};
}

/// 6. V(n) lies in its level-k interval (1e-12 guard band) for sampled n, k <= 12,
/// and the interval length equals phi^{-k} sum_{i=1}^{m-r} phi^{-i}.
inline CheckResult check_intervals(Scale scale)
{
    detail::Stopwatch sw;
    const int samples = scale == Scale::full ? 10'000 : 2'000;
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::uint64_t> pick(0, 999'999);
    std::uint64_t outside = 0;
    double worst_measure = 0;
    for (int m = 2; m <= 6; ++m) {
        MBonacciSystem sys(m, 1'000'000);
        for (int t = 0; t < samples; ++t) {
            std::uint64_t n = pick(rng);
            wide_real v = vdc_wide(sys, n);
            for (std::size_t k = 0; k <= 12; ++k) {
                auto iv = interval_for(sys, n, k);
                outside += !iv.contains(v, static_cast<wide_real>(1e-12));
                wide_real expect = 0;
                for (int i = 1; i <= m - iv.r; ++i)
                    expect += sys.phi_neg_power(i);
                expect *= sys.phi_neg_power(k);
                worst_measure = std::max(worst_measure, static_cast<double>(wide_abs(iv.length() - expect)));
            }
        }
    }
    bool ok = outside == 0 && worst_measure <= 1e-10;
    return {6, "vdC value in C_k interval", ok,
            "outside=" + std::to_string(outside) + " measure residual " + detail::fmt(worst_measure), sw.seconds()};
}

/// 7. Torus coverage by the clouds and the level-1 set equation on a grid.
inline CheckResult check_tiling(Scale scale)
{
    detail::Stopwatch sw;
    const std::size_t depth3 = scale == Scale::full ? 1'000'000 : 450'000;
    MBonacciSystem s2(2, 1'000'000), s3(3, 2'000'000);
    auto c2 = build_cloud(s2, 100'000);
    auto c3 = build_cloud(s3, depth3);
    auto t2 = tiling_check(c2, 1.0 / 256);
    auto t3 = tiling_check(c3, 1.0 / 32);
    auto e2 = set_equation_check(s2, c2, 1, 1.0 / 256);
    auto e3 = set_equation_check(s3, c3, 1, 1.0 / 32);
    double t = sw.seconds();
    bool ok = t2.coverage == 1.0 && t3.coverage == 1.0 && e2.ratio <= 0.05 && e3.ratio <= 0.05 && t <= 180.0;
    return {7, "tiling and set equation", ok,
            "coverage m2=" + detail::fmt(t2.coverage) + " m3=" + detail::fmt(t3.coverage) + "; set-eq ratio m2=" +
                detail::fmt(e2.ratio) + " m3=" + detail::fmt(e3.ratio) + " (<=0.05)",
            t};
}

/// 8. Letter frequencies of sigma^K(1), |sigma^K(1)| >= 10^5, within 1e-3 of phi^{-i}.
inline CheckResult check_frequencies(Scale)
{
    detail::Stopwatch sw;
    double worst = 0;
    for (int m = 2; m <= 6; ++m) {
        Word w{1};
        while (w.size() < 100'000)
            w = substitute(m, w);
        auto counts = abelianization(m, w);
        double phi = static_cast<double>(dominant_root(m));
        for (int i = 1; i <= m; ++i)
            worst = std::max(worst, std::fabs(double(counts[i - 1]) / double(w.size()) - std::pow(phi, -i)));
    }
    return {8, "letter frequencies", worst <= 1e-3, "max deviation " + detail::fmt(worst) + " (<=1e-3)",
            sw.seconds()};
}

/// max over N in [lo, hi] of N D_N / log N for the first N vdC points, every N.
inline double vdc_log_ratio(const MBonacciSystem& sys, std::uint64_t lo, std::uint64_t hi)
{
    std::vector<double> sorted;
    sorted.reserve(hi);
    double worst = 0;
    for (std::uint64_t n = 0; n < hi; ++n) {
        double v = vdc(sys, n);
        sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), v), v);
        const std::uint64_t count = n + 1;
        if (count < lo)
            continue;
        const double N = static_cast<double>(count);
        const double* x = sorted.data();
        double above = 0, below = 0;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const double r = static_cast<double>(i), nx = N * x[i];
            const double p = r + 1 - nx, q = nx - r;
            above = p > above ? p : above;
            below = q > below ? q : below;
        }
        worst = std::max(worst, std::max(above, below) / std::log(N));
    }
    return worst;
}

/// 9. N D_N / log N <= 3 for every N in [10^2, 10^5], m = 2, 3.
inline CheckResult check_vdc_discrepancy(Scale scale)
{
    detail::Stopwatch sw;
    const std::uint64_t hi = scale == Scale::full ? 100'000 : 10'000;
    double worst = 0;
    for (int m : {2, 3}) {
        MBonacciSystem sys(m, hi + 1);
        worst = std::max(worst, vdc_log_ratio(sys, 100, hi));
    }
    double t = sw.seconds();
    return {9, "1-D vdC discrepancy", worst <= 3.0 && t <= 60.0,
            "max N D_N/log N = " + detail::fmt(worst) + " over N<=" + std::to_string(hi) + " (<=3, 60s)", t};
}

/// 10. Example exponent and box-counting dimension of the boundary.
inline CheckResult check_dimension(Scale scale)
{
    detail::Stopwatch sw;
    const int ms[] = {2, 3};
    const double ds[] = {0.0, 1.09336};
    double expo = theorem_exponent(ms, ds);
    const std::size_t depth = scale == Scale::full ? 1'000'000 : 300'000;
    std::vector<int> levels = scale == Scale::full ? std::vector<int>{4, 5, 6, 7, 8, 9} : std::vector<int>{4, 5, 6, 7, 8};
    MBonacciSystem s3(3, 2'000'000), s2(2, 1'000'000);
    auto d3 = box_dim_boundary(build_cloud(s3, depth), levels, BoundaryRule::outer_boundary);
    auto d2 = box_dim_boundary(build_cloud(s2, 100'000), levels, BoundaryRule::outer_boundary);
    double t = sw.seconds();
    bool ok = std::fabs(expo + 0.302213) <= 1e-6 && d3.slope >= 0.94 && d3.slope <= 1.25 && d2.slope <= 0.15 &&
              t <= 300.0;
    return {10, "example exponent and boundary dimension", ok,
            "exponent " + detail::fmt(expo) + "; dim m3=" + detail::fmt(d3.slope) + " in [0.94,1.25]; m2=" +
                detail::fmt(d2.slope) + " (<=0.15)",
            t};
}

/// Exact star discrepancies of the first N Halton points for each N.
inline std::vector<std::pair<double, double>> halton_decay_samples(std::span<const int> ms,
                                                                   std::span<const std::uint64_t> counts,
                                                                   unsigned threads = 0)
{
    std::uint64_t top = *std::max_element(counts.begin(), counts.end());
    auto cfg = make_halton_config(ms, top + 1);
    PointSet all{ms.size(), {}};
    for (std::uint64_t n = 0; n < top; ++n)
        all.push(halton(cfg, n));
    std::vector<std::pair<double, double>> out;
    for (auto count : counts) {
        PointSet ps{ms.size(), {all.coords.begin(), all.coords.begin() + static_cast<long>(count * ms.size())}};
        out.emplace_back(static_cast<double>(count), star_disc_multi(ps, {4e9, threads}));
    }
    return out;
}

/// 11. Fitted decay exponent of D_N(H_(phi_2, phi_3)), N = 2^8..2^13, <= -0.30.
inline CheckResult check_halton_decay(Scale scale)
{
    detail::Stopwatch sw;
    std::vector<std::uint64_t> counts;
    const int top = scale == Scale::full ? 13 : 11;
    for (int e = 8; e <= top; ++e)
        counts.push_back(std::uint64_t{1} << e);
    const int ms[] = {2, 3};
    auto fit = decay_fit(halton_decay_samples(ms, counts));
    double t = sw.seconds();
    return {11, "Halton decay exponent", fit.exponent <= -0.30 && t <= 600.0,
            "fitted exponent " + detail::fmt(fit.exponent) + " (<= -0.30), r2 " + detail::fmt(fit.r2), t};
}

/// 12. Corner-enumeration discrepancy equals the naive oracle on random sets.
inline CheckResult check_star_oracle(Scale scale)
{
    detail::Stopwatch sw;
    const int instances = scale == Scale::full ? 200 : 40;
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> size(1, 64);
    double worst = 0;
    for (int t = 0; t < instances; ++t) {
        std::size_t s = t % 2 ? 3 : 2;
        PointSet ps{s, {}};
        int n = size(rng);
        for (int i = 0; i < n * static_cast<int>(s); ++i) {
            double x = u(rng);
            if (t % 5 == 0)
                x = std::floor(x * 8) / 8;  // force ties
            ps.coords.push_back(x);
        }
        worst = std::max(worst, std::fabs(star_disc_multi(ps) - naive_star_discrepancy(ps)));
    }
    return {12, "multi-D discrepancy vs naive oracle", worst <= 1e-12,
            std::to_string(instances) + " instances, max difference " + detail::fmt(worst), sw.seconds()};
}

/// Largest N * delta_k over N = F_j (j in [j_lo, j_hi]) and k <= k_max, m = 2.
/// Frozen regression value for j = 14..20, k = 1..6.
inline constexpr double frozen_local_constant_m2 = 0.0095151809294812626;

inline double local_discrepancy_constant(int m, std::size_t k_max, std::size_t j_lo, std::size_t j_hi)
{
    MBonacciSystem sys(m, std::uint64_t{1} << 40);
    double worst = 0;
    for (std::size_t j = j_lo; j <= j_hi; ++j)
        for (std::size_t k = 1; k <= k_max; ++k) {
            const std::uint64_t n = sys.term(j);
            worst = std::max(worst, static_cast<double>(n) * local_discrepancy(sys, k, n));
        }
    return worst;
}

/// 13. Level-k memberships partition the indices; delta_k in [0,1]; N delta_k <= 50 at N = F_j.
inline CheckResult check_local_discrepancy(Scale scale)
{
    detail::Stopwatch sw;
    const std::uint64_t count = scale == Scale::full ? 3'000 : 600;
    std::uint64_t partition_failures = 0;
    double lo = 1, hi = 0;
    for (int m : {2, 3}) {
        MBonacciSystem sys(m, 1'000'000);
        for (std::size_t k = 0; k <= 8; ++k) {
            auto addrs = level_addresses(sys, k);
            for (std::uint64_t n = 0; n < count; ++n) {
                int hits = 0;
                for (const auto& a : addrs)
                    hits += membership_oracle(sys, n, a);
                partition_failures += hits != 1;
            }
            double d = local_discrepancy(sys, k, count);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    const std::size_t j_hi = scale == Scale::full ? 20 : 16;
    double c = local_discrepancy_constant(2, 6, 14, j_hi);
    bool frozen = scale != Scale::full || std::fabs(c - frozen_local_constant_m2) <= 1e-9 * frozen_local_constant_m2;
    bool ok = partition_failures == 0 && lo >= 0 && hi <= 1 && c <= 50.0 && frozen;
    return {13, "local discrepancies delta_k", ok,
            "partition failures=" + std::to_string(partition_failures) + " delta range [" + detail::fmt(lo) + "," +
                detail::fmt(hi) + "], max N*delta_k at N=F_j: " + detail::fmt(c) + " (<=50)" + (frozen ? "" : " differs from frozen value"),
            sw.seconds()};
}

inline std::vector<std::function<CheckResult(Scale)>> all_checks()
{
    return {check_roundtrip,   check_word_lengths, check_characteristic,  check_conjugacy, check_partition,
            check_intervals,   check_tiling,       check_frequencies,     check_vdc_discrepancy,
            check_dimension,   check_halton_decay, check_star_oracle,     check_local_discrepancy};
}

} // namespace mbhalton::verify
