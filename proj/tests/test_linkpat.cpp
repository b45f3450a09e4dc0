#include <gtest/gtest.h>

#include <random>

#include "msle/linkpat.hpp"

using namespace msle;

TEST(LinkPattern, ParseRoundTrip) {
    for (int n = 1; n <= 5; ++n)
        for (const auto& p : enumerate_patterns(n)) EXPECT_EQ(LinkPattern::parse(p.str()), p);
    EXPECT_EQ(LinkPattern::parse("1-4.2-3").str(), "1-4.2-3");
}

TEST(LinkPattern, RejectsCrossingAndMalformed) {
    EXPECT_THROW(LinkPattern::parse("1-3.2-4"), std::invalid_argument);
    EXPECT_THROW(LinkPattern::parse("1-2.2-3"), std::invalid_argument);
    EXPECT_THROW(LinkPattern::parse("1-x"), std::invalid_argument);
}

TEST(LinkPattern, CatalanCounts) {
    const long cat[] = {1, 1, 2, 5, 14, 42, 132};
    for (int n = 1; n <= 6; ++n) {
        EXPECT_EQ(catalan(n), cat[n]);
        EXPECT_EQ(static_cast<long>(enumerate_patterns(n).size()), cat[n]);
    }
}

TEST(LinkPattern, EnumerationSortedAndUnique) {
    auto list = enumerate_patterns(4);
    for (std::size_t i = 1; i < list.size(); ++i) EXPECT_TRUE(list[i - 1] < list[i]);
}

TEST(Meander, SelfPairingHasNLoops) {
    for (int n = 1; n <= 5; ++n)
        for (const auto& p : enumerate_patterns(n)) EXPECT_EQ(meander_loops(p, p), n);
}

TEST(Meander, SymmetricLoopCount) {
    auto list = enumerate_patterns(4);
    for (const auto& a : list)
        for (const auto& b : list) EXPECT_EQ(meander_loops(a, b), meander_loops(b, a));
}

TEST(Meander, ParallelVsRainbowN2) {
    EXPECT_EQ(meander_loops(parallel_pattern(2), rainbow_pattern(2)), 1);
}

TEST(Meander, DeterminantMatchesProductFormula) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int n = 1; n <= 4; ++n)
        for (int k = 0; k < 5; ++k) {
            double nu = u(rng);
            double det = meander_matrix(n, nu).determinant();
            double ref = meander_det_reference(n, nu);
            EXPECT_NEAR(det, ref, 1e-10 * std::max(1.0, std::abs(ref))) << "n=" << n << " nu=" << nu;
        }
}

TEST(Meander, RenormalizedKeepsSingleLoopEntries) {
    auto list = enumerate_patterns(3);
    auto r = meander_matrix(3, 0.0, true);
    for (std::size_t i = 0; i < list.size(); ++i)
        for (std::size_t j = 0; j < list.size(); ++j)
            EXPECT_EQ(r(i, j), meander_loops(list[i], list[j]) == 1 ? 1.0 : 0.0);
}

TEST(Patterns, RotateHasOrder2N) {
    for (int n = 1; n <= 4; ++n)
        for (const auto& b : enumerate_patterns(n)) {
            auto r = b;
            for (int k = 0; k < 2 * n; ++k) r = rotate_pattern(r);
            EXPECT_EQ(r, b);
        }
}

TEST(Patterns, ReflectIsInvolution) {
    for (const auto& b : enumerate_patterns(4)) EXPECT_EQ(reflect_pattern(reflect_pattern(b)), b);
}

TEST(Patterns, RemoveLinkShrinks) {
    auto b = LinkPattern::parse("1-6.2-3.4-5");
    EXPECT_EQ(remove_link(b, 2).str(), "1-4.2-3");
    EXPECT_EQ(tie_links(LinkPattern::parse("1-2.3-4"), 2).str(), "1-4.2-3");
}

TEST(Patterns, IncidenceUnitriangular) {
    auto k = incidence_matrix(3);
    for (int i = 0; i < k.rows(); ++i) EXPECT_EQ(k(i, i), 1.0);
    EXPECT_NEAR(std::abs(k.determinant()), 1.0, 1e-12);
}

TEST(Patterns, NestingLevels) {
    auto lv = nesting_levels(LinkPattern::parse("1-6.2-5.3-4"));
    EXPECT_EQ(lv, (std::vector<int>{2, 1, 0}));
}
