#include <gtest/gtest.h>

#include <cmath>

#include "msle/partition.hpp"
#include "msle/sle.hpp"
#include "msle/specfun.hpp"
#include "oracles/frozen_values.hpp"

using namespace msle;

namespace {
const std::vector<double> kX(oracle::kZConfig, oracle::kZConfig + 4);
}

TEST(Partition, ConfigValidation) {
    EXPECT_THROW(check_config({0, 2, 1, 3}, 2), std::invalid_argument);
    EXPECT_THROW(check_config({0, 1, 2}, 2), std::invalid_argument);
    EXPECT_NO_THROW(check_config({0, 1, 2, 3}, 2));
}

TEST(Partition, N1ClosedForm) {
    for (double k : {3.3, 5.0, 7.2}) {
        auto kp = kappa_params(k);
        double ref = kp.nu * std::pow(1.4, -2 * kp.h);
        auto v = coulomb_F(k, parallel_pattern(1), {0.3, 1.7});
        EXPECT_NEAR(v.value, ref, 1e-9 * std::abs(ref)) << k;
    }
}

TEST(Partition, PureZMatchesOracle) {
    auto p = LinkPattern::parse("1-2.3-4"), r = LinkPattern::parse("1-4.2-3");
    EXPECT_NEAR(pure_Z(5.0, p, kX).value, oracle::kZKappa5[0], 1e-11);
    EXPECT_NEAR(pure_Z(5.0, r, kX).value, oracle::kZKappa5[1], 1e-11);
    EXPECT_NEAR(pure_Z(3.5, p, kX).value, oracle::kZKappa3p5[0], 1e-11);
    EXPECT_NEAR(pure_Z(3.5, r, kX).value, oracle::kZKappa3p5[1], 1e-11);
}

TEST(Partition, LogGradientMatchesOracle) {
    auto gp = pure_Z_log_grad(5.0, LinkPattern::parse("1-2.3-4"), kX);
    auto gr = pure_Z_log_grad(5.0, LinkPattern::parse("1-4.2-3"), kX);
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(gp[i], oracle::kLogGradKappa5Parallel[i], 1e-10);
        EXPECT_NEAR(gr[i], oracle::kLogGradKappa5Rainbow[i], 1e-10);
    }
}

TEST(Partition, LogGradientTranslationInvariant) {
    auto g = pure_Z_log_grad(4.5, LinkPattern::parse("1-4.2-3"), {0.2, 0.9, 1.3, 3.1});
    EXPECT_NEAR(g[0] + g[1] + g[2] + g[3], 0.0, 1e-12);
}

TEST(Partition, CardyAtKappaSix) {
    for (int i = 0; i < 4; ++i) {
        double chi = oracle::kCardyChi[i];
        // x = (0, u, 1, 2) has cross-ratio u/(2-u)
        double u = 2 * chi / (1 + chi);
        EXPECT_NEAR(pure_Z_N2(6.0, false, {0, u, 1, 2}), oracle::kCardy[i], 1e-10) << chi;
        EXPECT_NEAR(sle::cardy_value(chi), oracle::kCardy[i], 1e-10) << chi;
    }
}

TEST(Partition, SumOfPureEqualsOneAtKappaSix) {
    std::vector<double> x{0, 0.4, 1.9, 2.2};
    auto z = pure_Z_all(6.0, 2, x);
    EXPECT_NEAR(z[0].value + z[1].value, 1.0, 1e-9);
}

TEST(Partition, KappaFourBlocks) {
    std::vector<double> x{0, 1, 2.5, 4};
    auto p = LinkPattern::parse("1-2.3-4");
    EXPECT_NEAR(pure_Z_kappa4(p, x), pure_Z_N2(4.0, false, x), 1e-10);
}

TEST(Partition, SignStructureAtTwelveFifths) {
    EXPECT_NEAR(sign_structure_N2(12.0 / 5.0), 0.5, 1e-6);
}
