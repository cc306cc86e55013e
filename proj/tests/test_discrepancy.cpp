#include "mbhalton/discrepancy.hpp"
#include "mbhalton/rotation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mbhalton;

namespace {

// Direct oracle: corners range over the grid of every coordinate value seen on
// each axis plus 1; each corner is checked with closed and open counts.
double oracle_star(const PointSet& ps)
{
    const std::size_t s = ps.dims, n = ps.size();
    std::vector<std::vector<double>> axis(s);
    for (std::size_t j = 0; j < s; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            axis[j].push_back(ps.coords[i * s + j]);
        axis[j].push_back(1.0);
    }
    double best = 0;
    std::vector<std::size_t> at(s, 0);
    for (;;) {
        double vol = 1;
        for (std::size_t j = 0; j < s; ++j)
            vol *= axis[j][at[j]];
        double closed = 0, open = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool c = true, o = true;
            for (std::size_t j = 0; j < s; ++j) {
                c &= ps.coords[i * s + j] <= axis[j][at[j]];
                o &= ps.coords[i * s + j] < axis[j][at[j]];
            }
            closed += c;
            open += o;
        }
        best = std::max(best, std::max(closed / double(n) - vol, vol - open / double(n)));
        std::size_t j = 0;
        for (; j < s; ++j) {
            if (++at[j] < axis[j].size())
                break;
            at[j] = 0;
        }
        if (j == s)
            return best;
    }
}

PointSet random_points(std::mt19937_64& rng, std::size_t s, std::size_t n, int grid = 0)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointSet ps{s, {}};
    for (std::size_t i = 0; i < n * s; ++i) {
        double x = u(rng);
        if (grid)
            x = std::floor(x * grid) / grid;
        ps.coords.push_back(x);
    }
    return ps;
}

} // namespace

TEST(Star1d, Examples)
{
    EXPECT_EQ(star_disc_1d(std::vector<double>{0.0}), 1.0);
    EXPECT_EQ(star_disc_1d(std::vector<double>{0.0, 0.5}), 0.5);
    for (int n : {1, 2, 7, 100}) {
        std::vector<double> mid;
        for (int i = 0; i < n; ++i)
            mid.push_back((2.0 * i + 1) / (2.0 * n));
        EXPECT_NEAR(star_disc_1d(mid), 1.0 / (2 * n), 1e-15);
    }
}

TEST(Star1d, MatchesOracle)
{
    std::mt19937_64 rng(21);
    for (int t = 0; t < 100; ++t) {
        auto ps = random_points(rng, 1, 1 + t % 40, t % 3 == 0 ? 10 : 0);
        EXPECT_NEAR(star_disc_1d(ps.coords), oracle_star(ps), 1e-15);
    }
}

TEST(Star1d, Errors)
{
    EXPECT_THROW(star_disc_1d(std::vector<double>{}), std::invalid_argument);
    EXPECT_THROW(star_disc_1d(std::vector<double>{0.5, 1.0}), std::invalid_argument);
    EXPECT_THROW(star_disc_1d(std::vector<double>{-0.1}), std::invalid_argument);
    EXPECT_THROW(star_disc_1d(std::vector<double>{std::nan("")}), std::invalid_argument);
}

TEST(StarMulti, Examples)
{
    EXPECT_EQ(star_disc_multi(PointSet{2, {0.0, 0.0}}), 1.0);
    EXPECT_EQ(star_disc_multi(PointSet{2, {0.0, 0.0, 0.5, 0.5}}), 0.75);
    EXPECT_EQ(star_disc_multi(PointSet{1, {0.0, 0.5}}), 0.5);
}

TEST(StarMulti, MatchesOracle)
{
    std::mt19937_64 rng(22);
    for (int t = 0; t < 120; ++t) {
        std::size_t s = 2 + t % 3;
        std::size_t n = 1 + (t * 7) % 40;
        auto ps = random_points(rng, s, n, t % 4 == 0 ? 6 : 0);
        EXPECT_NEAR(star_disc_multi(ps), oracle_star(ps), 1e-12) << "s=" << s << " n=" << n;
    }
}

TEST(StarMulti, ThreadCountDoesNotChangeValue)
{
    std::mt19937_64 rng(23);
    auto ps = random_points(rng, 3, 300);
    double one = star_disc_multi(ps, {4e9, 1});
    EXPECT_EQ(star_disc_multi(ps, {4e9, 3}), one);
    EXPECT_EQ(star_disc_multi(ps, {4e9, 8}), one);
}

TEST(StarMulti, BudgetAndReport)
{
    std::mt19937_64 rng(24);
    auto ps = random_points(rng, 2, 400);
    EXPECT_THROW(star_disc_multi(ps, {1000, 1}), BudgetExceeded);
    auto exact = star_disc_report(ps);
    EXPECT_TRUE(exact.exact);
    EXPECT_EQ(exact.method, DiscrepancyMethod::brute_force_sD);
    EXPECT_EQ(exact.value, star_disc_multi(ps));
    auto thin = star_disc_report(ps, {20'000, 1});
    EXPECT_FALSE(thin.exact);
    EXPECT_EQ(thin.method, DiscrepancyMethod::subsampled_lower_bound);
    EXPECT_LE(thin.value, exact.value);
    EXPECT_GT(thin.value, 0.0);
    EXPECT_EQ(to_string(thin.method), "subsampled_lower_bound");
}

TEST(StarMulti, Errors)
{
    EXPECT_THROW(star_disc_multi(PointSet{2, {}}), std::invalid_argument);
    EXPECT_THROW(star_disc_multi(PointSet{2, {0.1, 0.2, 0.3}}), std::invalid_argument);
    EXPECT_THROW(star_disc_multi(PointSet{2, {0.1, 1.0}}), std::invalid_argument);
    PointSet ps{2, {}};
    EXPECT_THROW(ps.push(std::vector<double>{0.1}), std::invalid_argument);
}

TEST(StarMulti, ProjectionLowerBound)
{
    // anchored boxes [0,1) x ... contain the 1-D boxes of each projection
    std::mt19937_64 rng(25);
    for (int t = 0; t < 20; ++t) {
        auto ps = random_points(rng, 2, 50);
        std::vector<double> x, y;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            x.push_back(ps.coords[2 * i]);
            y.push_back(ps.coords[2 * i + 1]);
        }
        double full = star_disc_multi(ps);
        EXPECT_GE(full + 1e-15, star_disc_1d(x));
        EXPECT_GE(full + 1e-15, star_disc_1d(y));
    }
}

TEST(DecayFit, ExactPowerLaws)
{
    std::vector<std::pair<double, double>> inv, root;
    for (int e = 4; e <= 12; ++e) {
        double n = std::ldexp(1.0, e);
        inv.emplace_back(n, 1.0 / n);
        root.emplace_back(n, 3.0 / std::sqrt(n));
    }
    auto a = decay_fit(inv);
    EXPECT_NEAR(a.exponent, -1.0, 1e-12);
    EXPECT_NEAR(a.intercept, 0.0, 1e-12);
    EXPECT_NEAR(a.r2, 1.0, 1e-12);
    auto b = decay_fit(root);
    EXPECT_NEAR(b.exponent, -0.5, 1e-12);
    EXPECT_NEAR(b.intercept, std::log(3.0), 1e-12);
}

TEST(DecayFit, Errors)
{
    std::vector<std::pair<double, double>> few{{1, 1}, {2, 1}, {3, 1}};
    EXPECT_THROW(decay_fit(few), std::invalid_argument);
    std::vector<std::pair<double, double>> unsorted{{1, 1}, {3, 1}, {2, 1}, {4, 1}};
    EXPECT_THROW(decay_fit(unsorted), std::invalid_argument);
    std::vector<std::pair<double, double>> zero{{1, 1}, {2, 0}, {3, 1}, {4, 1}};
    EXPECT_THROW(decay_fit(zero), std::invalid_argument);
}

TEST(Decay, HaltonPairDecays)
{
    const int ms[] = {2, 3};
    auto cfg = make_halton_config(ms, 1 << 12);
    PointSet ps{2, {}};
    std::vector<std::pair<double, double>> samples;
    for (std::uint64_t n = 0; n < (1u << 11); ++n) {
        ps.push(halton(cfg, n));
        std::uint64_t c = n + 1;
        if (c >= 256 && (c & (c - 1)) == 0)
            samples.emplace_back(double(c), star_disc_multi(ps));
    }
    ASSERT_EQ(samples.size(), 4u);
    EXPECT_LE(decay_fit(samples).exponent, -0.30);
}

TEST(Decay, FibonacciRotationSequence)
{
    // the conjugated rotation points frac(n phi^{-2}) have discrepancy ~ log N / N
    MBonacciSystem sys(2, 100);
    std::vector<double> pts;
    std::vector<std::pair<double, double>> samples;
    for (std::uint64_t n = 0; n < (1u << 13); ++n) {
        pts.push_back(rotation_point(sys, n).coords[0]);
        std::uint64_t c = n + 1;
        if (c >= 256 && (c & (c - 1)) == 0)
            samples.emplace_back(double(c), star_disc_1d(pts));
    }
    EXPECT_LE(decay_fit(samples).exponent, -0.5);
}

TEST(BoxDimension, IntervalFractalHasFlatBoundary)
{
    auto cloud = build_cloud(MBonacciSystem(2, 1'000'000), 100'000);
    const int levels[] = {4, 5, 6, 7, 8, 9};
    for (auto rule : {BoundaryRule::outer_boundary, BoundaryRule::subtile_contacts}) {
        auto est = box_dim_boundary(cloud, levels, rule);
        EXPECT_LE(est.slope, 0.15);
        EXPECT_EQ(est.counts.size(), 6u);
    }
}

TEST(BoxDimension, TribonacciBoundary)
{
    auto cloud = build_cloud(MBonacciSystem(3, 1'000'000), 300'000);
    const int levels[] = {4, 5, 6, 7, 8};
    auto est = box_dim_boundary(cloud, levels);
    EXPECT_GE(est.slope, 0.94);
    EXPECT_LE(est.slope, 1.25);
    EXPECT_GT(est.r2, 0.99);
    for (std::size_t i = 1; i < est.counts.size(); ++i)
        EXPECT_GT(est.counts[i], est.counts[i - 1]);
}

TEST(BoxDimension, Errors)
{
    auto cloud = build_cloud(MBonacciSystem(3, 100'000), 5000);
    const int one[] = {4};
    EXPECT_THROW(box_dim_boundary(cloud, one), std::invalid_argument);
    const int deep[] = {4, 9};
    EXPECT_THROW(box_dim_boundary(cloud, deep), std::invalid_argument);
    const int bad[] = {0, 3};
    EXPECT_THROW(box_dim_boundary(cloud, bad), std::invalid_argument);
}

TEST(TheoremExponent, Examples)
{
    const int ms[] = {2, 3};
    const double ds[] = {0.0, 1.09336};
    EXPECT_NEAR(theorem_exponent(ms, ds), -0.302213, 1e-6);
    const int single[] = {2};
    const double zero[] = {0.0};
    EXPECT_EQ(theorem_exponent(single, zero), -1.0);
}

TEST(TheoremExponent, NegativeWheneverPreconditionsHold)
{
    std::mt19937_64 rng(26);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<int> ms;
        std::vector<double> ds;
        for (int m = 2; m <= 6; ++m)
            if (u(rng) < 0.5) {
                ms.push_back(m);
                ds.push_back(u(rng) * (m - 1) * 0.999);
            }
        if (ms.empty())
            continue;
        EXPECT_LT(theorem_exponent(ms, ds), 0.0);
    }
}

TEST(TheoremExponent, Errors)
{
    const int dup[] = {3, 3};
    const double ds[] = {0.5, 0.5};
    EXPECT_THROW(theorem_exponent(dup, ds), std::invalid_argument);
    const int ms[] = {2, 3};
    const double big[] = {1.0, 0.5};
    EXPECT_THROW(theorem_exponent(ms, big), std::invalid_argument);
    const double neg[] = {-0.1, 0.5};
    EXPECT_THROW(theorem_exponent(ms, neg), std::invalid_argument);
    EXPECT_THROW(theorem_exponent(ms, std::span<const double>(ds, 1)), std::invalid_argument);
}
