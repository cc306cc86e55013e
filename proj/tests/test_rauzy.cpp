#include "mbhalton/rauzy.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mbhalton;

namespace {

// Literal iteration of sigma on the letter 1.
Word sigma_power(int m, std::size_t k)
{
    Word w{1};
    for (std::size_t t = 0; t < k; ++t)
        w = substitute(m, w);
    return w;
}

const FractalCloud& tribonacci_cloud()
{
    static const FractalCloud cloud = build_cloud(MBonacciSystem(3, 1'000'000), 450'000);
    return cloud;
}

const FractalCloud& fibonacci_cloud()
{
    static const FractalCloud cloud = build_cloud(MBonacciSystem(2, 1'000'000), 100'000);
    return cloud;
}

} // namespace

TEST(Words, FixedPointPrefixes)
{
    EXPECT_EQ(fixed_point_prefix(2, 8), (Word{1, 2, 1, 1, 2, 1, 2, 1}));
    EXPECT_EQ(fixed_point_prefix(3, 7), (Word{1, 2, 1, 3, 1, 2, 1}));
    for (int m = 2; m <= 6; ++m)
        EXPECT_EQ(fixed_point_prefix(m, 1), Word{1});
}

TEST(Words, FixedPointIsSubstitutionInvariant)
{
    for (int m = 2; m <= 5; ++m) {
        Word u = fixed_point_prefix(m, 5000);
        Word su = substitute(m, u);
        ASSERT_GE(su.size(), u.size());
        EXPECT_TRUE(std::equal(u.begin(), u.end(), su.begin()));
        Word literal = sigma_power(m, 14);
        std::size_t n = std::min(literal.size(), u.size());
        EXPECT_TRUE(std::equal(u.begin(), u.begin() + static_cast<long>(n), literal.begin()));
    }
}

TEST(Words, LengthsAreBasisTerms)
{
    EXPECT_EQ(sigma_power(2, 5).size(), 13u);
    EXPECT_EQ(sigma_power(3, 4).size(), 13u);
    for (int m = 2; m <= 6; ++m) {
        MBonacciSystem sys(m, std::uint64_t{1} << 30);
        EXPECT_EQ(sigma_power(m, 0).size(), 1u);
        for (std::size_t k = 0; k <= 25; ++k) {
            EXPECT_TRUE(word_length_check(sys, k)) << "m=" << m << " k=" << k;
            if (k <= 14) {
                EXPECT_EQ(sigma_power(m, k).size(), sigma_power_length(m, k));
            }
        }
        EXPECT_THROW(word_length_check(sys, sys.terms()), std::out_of_range);
    }
}

TEST(Words, DumontThomasLengths)
{
    // n = sum_j |sigma^j(p_j)| with p_j = 1^{e_j}
    for (int m = 2; m <= 4; ++m) {
        MBonacciSystem sys(m, 20'000);
        std::vector<std::uint64_t> len;
        for (std::size_t j = 0; j < sys.terms(); ++j)
            len.push_back(sigma_power(m, j).size());
        for (std::uint64_t n = 0; n <= 10'000; ++n) {
            Expansion e = encode(sys, n);
            std::uint64_t total = 0;
            for (std::size_t j = 0; j < e.size(); ++j)
                total += e.digits[j] * len[j];
            ASSERT_EQ(total, n);
        }
    }
}

TEST(Graph, Edges)
{
    auto e2 = prefix_suffix_edges(2);
    ASSERT_EQ(e2.size(), 3u);
    EXPECT_NE(std::find(e2.begin(), e2.end(), PrefixSuffixEdge{1, 1, 0}), e2.end());
    EXPECT_NE(std::find(e2.begin(), e2.end(), PrefixSuffixEdge{2, 1, 1}), e2.end());
    EXPECT_NE(std::find(e2.begin(), e2.end(), PrefixSuffixEdge{1, 2, 0}), e2.end());

    auto e3 = prefix_suffix_edges(3);
    std::vector<PrefixSuffixEdge> expect{{1, 1, 0}, {2, 1, 1}, {1, 2, 0}, {3, 2, 1}, {1, 3, 0}};
    ASSERT_EQ(e3.size(), expect.size());
    for (const auto& e : expect)
        EXPECT_NE(std::find(e3.begin(), e3.end(), e), e3.end());

    for (int m = 2; m <= 8; ++m) {
        auto edges = prefix_suffix_edges(m);
        EXPECT_EQ(edges.size(), static_cast<std::size_t>(2 * m - 1));
        auto images = substitution_images(m);
        for (const auto& e : edges) {
            const Word& img = images[e.to - 1];
            ASSERT_LT(static_cast<std::size_t>(e.prefix_len), img.size());
            EXPECT_EQ(img[e.prefix_len], e.from);
            if (e.prefix_len == 1) {
                EXPECT_EQ(img[0], 1);
            }
        }
    }
}

TEST(Graph, WalkCountsMatchIncidencePowers)
{
    for (int m = 2; m <= 4; ++m) {
        auto b = incidence_matrix(m);
        // total walks of length k = sum of the entries of B^k
        std::vector<std::int64_t> power(m * m, 0);
        for (int i = 0; i < m; ++i)
            power[i * m + i] = 1;
        for (std::size_t k = 0; k <= 8; ++k) {
            std::int64_t total = 0;
            for (auto x : power)
                total += x;
            EXPECT_EQ(static_cast<std::int64_t>(walks_of_length(m, k).size()), total);
            std::vector<std::int64_t> next(m * m, 0);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    for (int l = 0; l < m; ++l)
                        next[i * m + j] += power[i * m + l] * b(l, j);
            power = next;
        }
    }
}

TEST(Graph, WalkAbelianizationSumsToOffset)
{
    MBonacciSystem sys(3, 100'000);
    for (std::uint64_t n = 0; n < 3000; ++n) {
        Expansion e = encode(sys, n);
        auto x = walk_abelianization(3, e.digits);
        std::int64_t s = x[0] + x[1] + x[2];
        EXPECT_EQ(static_cast<std::uint64_t>(s), n);
    }
}

TEST(Cloud, FirstPoints)
{
    MBonacciSystem sys(2, 1000);
    auto cloud = build_cloud(sys, 10);
    ASSERT_EQ(cloud.size(), 11u);
    EXPECT_EQ(cloud.point(0), zero_point(1));
    EXPECT_EQ(cloud.labels[0], 1);
    EXPECT_EQ(cloud.labels[1], 2);
    EXPECT_NEAR(cloud.point(1).coords[0], std::pow(sys.phi(), -2), 1e-15);
}

TEST(Cloud, PointsAreProjectedPrefixes)
{
    for (int m = 2; m <= 5; ++m) {
        MBonacciSystem sys(m, 100'000);
        auto cloud = build_cloud(sys, 5000);
        Word u = sigma_power(m, 20);
        std::vector<std::int64_t> counts(m, 0);
        for (std::size_t n = 0; n <= 5000; ++n) {
            ASSERT_EQ(cloud.labels[n], u[n]);
            auto lifted = lattice_coords(sys, counts);
            auto expect = torus_reduce(lifted);
            ASSERT_LE(torus_distance(cloud.point(n), expect), 1e-12);
            for (int i = 0; i < m - 1; ++i)
                ASSERT_NEAR(cloud.lifted_coords(n)[i], static_cast<double>(lifted[i]), 1e-12);
            ASSERT_LE(torus_distance(cloud.point(n), rotation_point(sys, n)), 1e-9);
            ++counts[u[n] - 1];
        }
    }
}

TEST(Cloud, LetterFrequencies)
{
    for (int m = 2; m <= 4; ++m) {
        MBonacciSystem sys(m, 1'000'000);
        auto cloud = build_cloud(sys, 100'000);
        std::vector<double> freq(m, 0);
        for (auto l : cloud.labels)
            freq[l - 1] += 1.0 / static_cast<double>(cloud.size());
        for (int i = 1; i <= m; ++i)
            EXPECT_NEAR(freq[i - 1], std::pow(sys.phi(), -i), 1e-3);
    }
}

TEST(Cloud, LiftedCoordinatesAreBounded)
{
    // the Rauzy fractal is compact: coordinates stay in a fixed box
    const auto& cloud = tribonacci_cloud();
    double lo = 0, hi = 0;
    for (double x : cloud.lifted) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    EXPECT_GT(lo, -3.0);
    EXPECT_LT(hi, 3.0);
}

TEST(Cloud, Errors)
{
    MBonacciSystem sys(3, 1000);
    EXPECT_THROW(build_cloud(sys, 0), std::invalid_argument);
    EXPECT_THROW(build_cloud(sys, 100, 50), std::length_error);
}

TEST(Subtiles, Examples)
{
    MBonacciSystem fib(2, 1000);
    auto a = subtile_of(fib, 0, 3);
    EXPECT_EQ(a.digits, (std::vector<Digit>{0, 0, 0}));
    EXPECT_EQ(a.r, 0);
    EXPECT_EQ(a.max_letter(), 2);
    EXPECT_EQ(a.letter, 1);

    // n = F_4 = 13 has e_3 = 0, e_4 = 1
    MBonacciSystem tri(3, 1000);
    auto b = subtile_of(tri, 13, 5);
    EXPECT_EQ(b.digits, (std::vector<Digit>{0, 0, 0, 0, 1}));
    EXPECT_EQ(b.r, 1);
    EXPECT_EQ(b.max_letter(), 2);
    EXPECT_EQ(b.letter, 1);
    EXPECT_EQ(address_offset(tri, b), 13u);
}

TEST(Subtiles, AddressInvariants)
{
    for (int m = 2; m <= 4; ++m) {
        MBonacciSystem sys(m, 100'000);
        const Word u = fixed_point_prefix(m, 5001);
        for (std::uint64_t n = 0; n < 5000; ++n)
            for (std::size_t k = 0; k <= 8; ++k) {
                auto a = subtile_of(sys, n, k);
                Expansion e = encode(sys, n);
                ASSERT_TRUE(is_admissible(m, a.digits));
                ASSERT_GE(a.letter, 1);
                ASSERT_LE(a.letter, a.max_letter());
                ASSERT_EQ(address_offset(sys, a), low_digits_value(sys, e, k));
                // the walk ending letter at level k is u_{n'+1} for n' the digits from k up
                std::uint64_t high = 0;
                for (std::size_t j = k; j < e.size(); ++j)
                    high += e.digits[j] * sys.term(j - k);
                ASSERT_EQ(a.letter, u[high]);
            }
    }
}

TEST(SetEquation, IdentityAtLevelZero)
{
    MBonacciSystem sys(2, 1'000'000);
    auto rep = set_equation_check(sys, fibonacci_cloud(), 0, 1.0 / 256);
    EXPECT_EQ(rep.symmetric_difference, 0u);
    EXPECT_EQ(rep.ratio, 0.0);
}

TEST(SetEquation, Fibonacci)
{
    MBonacciSystem sys(2, 1'000'000);
    auto rep = set_equation_check(sys, fibonacci_cloud(), 1, 1.0 / 256);
    EXPECT_LE(rep.ratio, 0.05);
    EXPECT_EQ(rep.walks, 3u);
}

TEST(SetEquation, Tribonacci)
{
    MBonacciSystem sys(3, 1'000'000);
    auto one = set_equation_check(sys, tribonacci_cloud(), 1, 1.0 / 64);
    EXPECT_LE(one.ratio, 0.05);
    auto two = set_equation_check(sys, tribonacci_cloud(), 2, 1.0 / 32);
    EXPECT_LE(two.ratio, 0.05);
}

TEST(SetEquation, DensityGuard)
{
    MBonacciSystem sys(3, 1'000'000);
    auto sparse = build_cloud(sys, 1000);
    EXPECT_THROW(set_equation_check(sys, sparse, 1, 1.0 / 64), std::invalid_argument);
    EXPECT_THROW(set_equation_check(MBonacciSystem(2, 100), sparse, 1, 0.5), std::invalid_argument);
}

TEST(Tiling, Coverage)
{
    auto fib = tiling_check(fibonacci_cloud(), 1.0 / 256);
    EXPECT_EQ(fib.coverage, 1.0);
    EXPECT_EQ(fib.cells, 256u);
    auto tri = tiling_check(tribonacci_cloud(), 1.0 / 32);
    EXPECT_EQ(tri.coverage, 1.0);
    EXPECT_EQ(tri.cells, 1024u);
    EXPECT_GT(tri.lifted_measure, 0.95);
    EXPECT_LT(tri.lifted_measure, 1.35);
}

TEST(Tiling, OverlapGrowsUnderCoarsening)
{
    // merging cells can only turn single-letter cells into multi-letter ones
    double prev = -1;
    for (int level = 6; level >= 2; --level) {
        auto rep = tiling_check(tribonacci_cloud(), std::ldexp(1.0, -level));
        EXPECT_GE(rep.overlap_fraction, prev) << "level " << level;
        prev = rep.overlap_fraction;
    }
    // the interval fractal has letter boundaries at single points only
    auto fib = tiling_check(fibonacci_cloud(), 1.0 / 256);
    EXPECT_LE(fib.multi_letter, 2u);
}

TEST(Tiling, DensityGuard)
{
    EXPECT_THROW(tiling_check(tribonacci_cloud(), 1.0 / 128), std::invalid_argument);
    EXPECT_THROW(tiling_check(fibonacci_cloud(), 0.3), std::invalid_argument);
}
