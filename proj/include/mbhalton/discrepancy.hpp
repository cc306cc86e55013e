#pragma once

#include "mbhalton/detail/grid.hpp"
#include "mbhalton/detail/parallel.hpp"
#include "mbhalton/rauzy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mbhalton {

/// N points in [0,1)^dims, stored flat.
struct PointSet
{
    std::size_t dims = 0;
    std::vector<double> coords;

    std::size_t size() const { return dims ? coords.size() / dims : 0; }
    std::span<const double> point(std::size_t i) const { return {coords.data() + i * dims, dims}; }
    void push(std::span<const double> p)
    {
        if (p.size() != dims)
            throw std::invalid_argument("PointSet::push: dimension mismatch");
        coords.insert(coords.end(), p.begin(), p.end());
    }
};

enum class DiscrepancyMethod
{
    exact1d,
    brute_force_sD,
    subsampled_lower_bound,
};

inline std::string_view to_string(DiscrepancyMethod m)
{
    switch (m) {
    case DiscrepancyMethod::exact1d: return "exact1d";
    case DiscrepancyMethod::brute_force_sD: return "brute_force_sD";
    case DiscrepancyMethod::subsampled_lower_bound: return "subsampled_lower_bound";
    }
    return "unknown";
}

struct DiscrepancyReport
{
    std::size_t n = 0;
    double value = 0;
    DiscrepancyMethod method = DiscrepancyMethod::exact1d;
    std::size_t dims = 1;
    double seconds = 0;
    bool exact = true;
};

/// Thrown when exact corner enumeration would exceed the work budget.
class BudgetExceeded : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_unit(double x, const char* where)
{
    if (!(x >= 0.0 && x < 1.0))
        throw std::invalid_argument(std::string(where) + ": point outside [0,1)");
}

} // namespace detail

/// Exact star discrepancy of a one-dimensional point set:
/// max_i max(i/N - x_(i), x_(i) - (i-1)/N) over the sorted points.
inline double star_disc_1d(std::span<const double> points)
{
    if (points.empty())
        throw std::invalid_argument("star_disc_1d: empty point set");
    std::vector<double> x(points.begin(), points.end());
    for (double v : x)
        detail::check_unit(v, "star_disc_1d");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double above = static_cast<double>(i + 1) / n - x[i];
        double below = x[i] - static_cast<double>(i) / n;
        d = std::max({d, above, below});
    }
    return d;
}

struct StarOptions
{
    double budget = 4e9;   // point-corner visits allowed for exact enumeration
    unsigned threads = 0;  // 0: MBHALTON_THREADS or 1
};

namespace detail {

// Candidate corner values of one axis: the distinct coordinates and 1.
inline std::vector<double> axis_candidates(const PointSet& ps, std::size_t axis)
{
    std::vector<double> c;
    c.reserve(ps.size() + 1);
    for (std::size_t i = 0; i < ps.size(); ++i)
        c.push_back(ps.coords[i * ps.dims + axis]);
    c.push_back(1.0);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

inline double corner_work(const PointSet& ps, const std::vector<std::vector<double>>& cand)
{
    double w = static_cast<double>(ps.size());
    for (std::size_t j = 0; j + 1 < ps.dims; ++j)
        w *= static_cast<double>(cand[j].size());
    return w;
}

// Sup over corners drawn from cand (one list per axis). For each choice of the
// first dims-1 coordinates, points are histogrammed by the rank of their last
// coordinate and a prefix sweep covers every last-axis candidate. Both the
// open count (all coords < w) and the closed count (all <= w) are evaluated.
inline double corner_sup(const PointSet& ps, const std::vector<std::vector<double>>& cand, unsigned threads)
{
    const std::size_t s = ps.dims;
    const std::size_t n = ps.size();
    const auto& last = cand[s - 1];
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) {
        double y = ps.coords[i * s + s - 1];
        rank[i] = static_cast<std::size_t>(std::lower_bound(last.begin(), last.end(), y) - last.begin());
    }

    std::size_t outer = 1;
    for (std::size_t j = 0; j + 1 < s; ++j)
        outer *= cand[j].size();

    const double inv_n = 1.0 / static_cast<double>(n);
    const unsigned workers = resolve_threads(threads);
    std::vector<double> best(workers, 0.0);

    parallel_chunks(outer, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        std::vector<std::uint32_t> open_hist(last.size()), closed_hist(last.size());
        std::vector<double> corner(s - 1);
        double local = 0;
        for (std::size_t c = begin; c < end; ++c) {
            std::size_t rem = c;
            double vol = 1.0;
            for (std::size_t j = s - 1; j-- > 0;) {
                corner[j] = cand[j][rem % cand[j].size()];
                rem /= cand[j].size();
                vol *= corner[j];
            }
            std::fill(open_hist.begin(), open_hist.end(), 0);
            std::fill(closed_hist.begin(), closed_hist.end(), 0);
            for (std::size_t i = 0; i < n; ++i) {
                const double* p = &ps.coords[i * s];
                bool open = true, closed = true;
                for (std::size_t j = 0; j + 1 < s && closed; ++j) {
                    if (p[j] > corner[j])
                        closed = false;
                    if (p[j] >= corner[j])
                        open = false;
                }
                if (closed)
                    ++closed_hist[rank[i]];
                if (open)
                    ++open_hist[rank[i]];
            }
            std::uint64_t open_below = 0, closed_upto = 0;
            for (std::size_t r = 0; r < last.size(); ++r) {
                closed_upto += closed_hist[r];
                double v = vol * last[r];
                local = std::max({local, v - static_cast<double>(open_below) * inv_n,
                                  static_cast<double>(closed_upto) * inv_n - v});
                open_below += open_hist[r];
            }
        }
        best[w] = local;
    });
    return *std::max_element(best.begin(), best.end());
}

} // namespace detail

inline void validate_points(const PointSet& ps, const char* where)
{
    if (ps.dims == 0 || ps.size() == 0)
        throw std::invalid_argument(std::string(where) + ": empty point set");
    if (ps.coords.size() % ps.dims)
        throw std::invalid_argument(std::string(where) + ": ragged coordinates");
    for (double v : ps.coords)
        detail::check_unit(v, where);
}

/// Exact star discrepancy by critical-corner enumeration. The sup over anchored
/// boxes is attained (as a limit) at corners whose coordinates are point
/// coordinates or 1. Work is N * prod_{j<s} (#candidates_j); throws
/// BudgetExceeded when that exceeds options.budget.
inline double star_disc_multi(const PointSet& ps, const StarOptions& opt = {})
{
    validate_points(ps, "star_disc_multi");
    if (ps.dims == 1)
        return star_disc_1d(ps.coords);
    std::vector<std::vector<double>> cand(ps.dims);
    for (std::size_t j = 0; j < ps.dims; ++j)
        cand[j] = detail::axis_candidates(ps, j);
    double work = detail::corner_work(ps, cand);
    if (work > opt.budget)
        throw BudgetExceeded("star_disc_multi: " + std::to_string(work) + " point-corner visits exceed budget " +
                             std::to_string(opt.budget) + "; use a smaller N");
    return detail::corner_sup(ps, cand, opt.threads);
}

/// Star discrepancy as a report. Over budget, the first dims-1 candidate lists
/// are thinned to evenly spaced subsets (1 always kept) and the resulting
/// lower bound is flagged with method subsampled_lower_bound.
inline DiscrepancyReport star_disc_report(const PointSet& ps, const StarOptions& opt = {})
{
    auto t0 = std::chrono::steady_clock::now();
    validate_points(ps, "star_disc_report");
    DiscrepancyReport rep;
    rep.n = ps.size();
    rep.dims = ps.dims;
    if (ps.dims == 1) {
        rep.value = star_disc_1d(ps.coords);
        rep.method = DiscrepancyMethod::exact1d;
    } else {
        std::vector<std::vector<double>> cand(ps.dims);
        for (std::size_t j = 0; j < ps.dims; ++j)
            cand[j] = detail::axis_candidates(ps, j);
        double work = detail::corner_work(ps, cand);
        rep.method = DiscrepancyMethod::brute_force_sD;
        if (work > opt.budget) {
            double shrink = std::pow(opt.budget / work, 1.0 / static_cast<double>(ps.dims - 1));
            for (std::size_t j = 0; j + 1 < ps.dims; ++j) {
                auto keep = std::max<std::size_t>(2, static_cast<std::size_t>(shrink * cand[j].size()));
                std::vector<double> thin;
                for (std::size_t t = 0; t < keep; ++t)
                    thin.push_back(cand[j][t * (cand[j].size() - 1) / (keep - 1)]);
                thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
                cand[j] = std::move(thin);
            }
            rep.method = DiscrepancyMethod::subsampled_lower_bound;
            rep.exact = false;
        }
        rep.value = detail::corner_sup(ps, cand, opt.threads);
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

struct DecayFit
{
    double exponent = 0;
    double intercept = 0;
    double r2 = 0;
};

/// Least-squares fit of log D_N = intercept + exponent * log N.
inline DecayFit decay_fit(std::span<const std::pair<double, double>> samples)
{
    if (samples.size() < 4)
        throw std::invalid_argument("decay_fit: need at least 4 samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].first > 0 && samples[i].second > 0))
            throw std::invalid_argument("decay_fit: N and D_N must be positive");
        if (i && !(samples[i].first > samples[i - 1].first))
            throw std::invalid_argument("decay_fit: N must be strictly increasing");
    }
    const double k = static_cast<double>(samples.size());
    double sx = 0, sy = 0;
    for (auto [n, d] : samples) {
        sx += std::log(n);
        sy += std::log(d);
    }
    const double mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto [n, d] : samples) {
        double dx = std::log(n) - mx, dy = std::log(d) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0)
        throw std::invalid_argument("decay_fit: degenerate samples");
    DecayFit f;
    f.exponent = sxy / sxx;
    f.intercept = my - f.exponent * mx;
    f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

enum class BoundaryRule
{
    /// Reduced (torus) coordinates with wrap-around: a cell is a boundary cell
    /// when it holds points of >= 2 letters or borders an empty cell.
    subtile_contacts,
    /// Lifted coordinates: occupied cells with at least one empty face neighbour.
    outer_boundary,
};

struct DimensionEstimate
{
    std::vector<int> levels;
    std::vector<std::uint64_t> counts;
    double slope = 0;
    double stderr_slope = 0;
    double r2 = 0;
};

namespace detail {

inline std::uint64_t torus_boundary_count(const FractalCloud& cloud, int level)
{
    const std::size_t d = cloud.dims();
    const std::size_t side = std::size_t{1} << level;
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i)
        total *= side;
    std::vector<std::uint32_t> mask(total, 0);
    for (std::size_t n = 0; n < cloud.size(); ++n)
        mask[torus_cell(cloud.torus_coords(n), side)] |= 1u << (cloud.labels[n] - 1);

    std::vector<std::size_t> idx(d);
    std::uint64_t count = 0;
    for (std::size_t c = 0; c < total; ++c) {
        std::uint32_t b = mask[c];
        if (!b)
            continue;
        if (b & (b - 1)) {
            ++count;
            continue;
        }
        std::size_t rem = c;
        for (std::size_t a = d; a-- > 0;) {
            idx[a] = rem % side;
            rem /= side;
        }
        bool edge = false;
        std::size_t stride = 1;
        for (std::size_t a = d; a-- > 0 && !edge;) {
            for (int dir : {-1, 1}) {
                std::size_t nb = (idx[a] + side + dir) % side;
                std::size_t other = c + (nb - idx[a]) * stride;  // modular arithmetic on size_t
                if (!mask[other]) {
                    edge = true;
                    break;
                }
            }
            stride *= side;
        }
        if (edge)
            ++count;
    }
    return count;
}

inline std::uint64_t lifted_boundary_count(const FractalCloud& cloud, int level)
{
    const std::size_t d = cloud.dims();
    CellPacker grid(d, std::ldexp(1.0, -level));
    std::unordered_set<std::uint64_t> occ;
    occ.reserve(cloud.size());
    for (std::size_t n = 0; n < cloud.size(); ++n)
        occ.insert(grid.key(cloud.lifted_coords(n)));
    std::vector<std::int64_t> idx(d);
    std::uint64_t count = 0;
    for (auto key : occ) {
        grid.indices(key, idx);
        bool edge = false;
        for (std::size_t a = 0; a < d && !edge; ++a)
            for (int dir : {-1, 1}) {
                idx[a] += dir;
                bool empty = !occ.count(grid.key_from_indices(idx));
                idx[a] -= dir;
                if (empty) {
                    edge = true;
                    break;
                }
            }
        if (edge)
            ++count;
    }
    return count;
}

} // namespace detail

/// Box-counting estimate of the boundary dimension: boundary cells of side
/// 2^{-l} are counted per level and log(count) is regressed on l log 2.
/// A level with no boundary cells counts as one box, so an empty boundary
/// yields slope 0. Needs on average one point per finest cell.
inline DimensionEstimate box_dim_boundary(const FractalCloud& cloud, std::span<const int> levels,
                                          BoundaryRule rule = BoundaryRule::outer_boundary)
{
    if (levels.size() < 2)
        throw std::invalid_argument("box_dim_boundary: need at least two levels");
    int top = 0;
    for (int l : levels) {
        if (l < 1 || l > 24)
            throw std::invalid_argument("box_dim_boundary: levels must lie in [1, 24]");
        top = std::max(top, l);
    }
    const double needed = std::ldexp(1.0, top * static_cast<int>(cloud.dims()));
    if (static_cast<double>(cloud.size()) < needed)
        throw std::invalid_argument("box_dim_boundary: cloud density insufficient for level " + std::to_string(top));

    DimensionEstimate est;
    est.levels.assign(levels.begin(), levels.end());
    std::vector<std::pair<double, double>> xy;
    for (int l : levels) {
        std::uint64_t c = rule == BoundaryRule::subtile_contacts ? detail::torus_boundary_count(cloud, l)
                                                                 : detail::lifted_boundary_count(cloud, l);
        est.counts.push_back(c);
        xy.emplace_back(l * std::log(2.0), std::log(static_cast<double>(std::max<std::uint64_t>(c, 1))));
    }
    const double k = static_cast<double>(xy.size());
    double mx = 0, my = 0;
    for (auto [x, y] : xy) {
        mx += x;
        my += y;
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx <= 0)
        throw std::invalid_argument("box_dim_boundary: levels must not all be equal");
    est.slope = sxy / sxx;
    double sse = std::max(0.0, syy - est.slope * sxy);
    est.stderr_slope = xy.size() > 2 ? std::sqrt(sse / (k - 2) / sxx) : 0.0;
    est.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    return est;
}

/// Decay exponent max_i (d_i - (m_i - 1)) / sum_i (m_i - 1) for pairwise distinct
/// m_i with boundary dimensions 0 <= d_i < m_i - 1.
inline double theorem_exponent(std::span<const int> ms, std::span<const double> dims)
{
    if (ms.empty() || ms.size() != dims.size())
        throw std::invalid_argument("theorem_exponent: ms and dims must be non-empty and of equal length");
    std::set<int> seen;
    double worst = -std::numeric_limits<double>::infinity();
    double total = 0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (ms[i] < 2)
            throw std::invalid_argument("theorem_exponent: every m must be >= 2");
        if (!seen.insert(ms[i]).second)
            throw std::invalid_argument("theorem_exponent: m values must be pairwise distinct");
        if (!(dims[i] >= 0) || !(dims[i] < ms[i] - 1))
            throw std::invalid_argument("theorem_exponent: need 0 <= d_i < m_i - 1 (d=" + std::to_string(dims[i]) +
                                        ", m=" + std::to_string(ms[i]) + ")");
        worst = std::max(worst, dims[i] - (ms[i] - 1));
        total += ms[i] - 1;
    }
    return worst / total;
}

} // namespace mbhalton
