#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "msle/specfun.hpp"
#include "oracles/frozen_values.hpp"

using namespace msle;

TEST(SpecFun, GammaMatchesOracle) {
    for (int i = 0; i < 5; ++i)
        EXPECT_NEAR(gamma_fn(oracle::kGammaX[i]), oracle::kGamma[i], 1e-13 * std::abs(oracle::kGamma[i]));
}

TEST(SpecFun, ReciprocalGammaVanishesAtPoles) {
    EXPECT_EQ(rgamma(0.0), 0.0);
    EXPECT_EQ(rgamma(-3.0), 0.0);
    EXPECT_NEAR(rgamma(0.3), 1.0 / oracle::kGamma[0], 1e-14);
}

TEST(SpecFun, Hyp2f1MatchesOracle) {
    for (int i = 0; i < 6; ++i) {
        const double* a = oracle::kHypArgs + 4 * i;
        EXPECT_NEAR(hyp2f1(a[0], a[1], a[2], a[3]), oracle::kHyp[i], 1e-12 * std::abs(oracle::kHyp[i])) << i;
    }
}

TEST(SpecFun, Hyp2f1DerivativeMatchesOracle) {
    for (int i = 0; i < 6; ++i) {
        const double* a = oracle::kHypArgs + 4 * i;
        EXPECT_NEAR(hyp2f1_dz(a[0], a[1], a[2], a[3]), oracle::kHypDz[i], 1e-10 * std::abs(oracle::kHypDz[i])) << i;
    }
}

TEST(SpecFun, NuOverCMatchesOracle) {
    for (int i = 0; i < 3; ++i)
        EXPECT_NEAR(nu_over_c(oracle::kNuCKappa[i]), oracle::kNuOverC[i], 1e-12 * std::abs(oracle::kNuOverC[i]));
}

TEST(SpecFun, KappaParams) {
    auto p = kappa_params(6.0);
    EXPECT_NEAR(p.h, 0.0, 1e-15);
    EXPECT_NEAR(p.nu, 1.0, 1e-14);
    EXPECT_NEAR(kappa_params(4.0).nu, 2.0, 1e-14);
    EXPECT_NEAR(kappa_params(8.0 / 3.0).nu, 0.0, 1e-14);
    EXPECT_TRUE(kappa_params(8.0).exceptional);
}

TEST(SpecFun, ExceptionalIndex) {
    EXPECT_EQ(exceptional_index(8.0), 1);
    EXPECT_EQ(exceptional_index(8.0 / 3.0), 3);
    EXPECT_EQ(exceptional_index(4.0), 2);
    EXPECT_EQ(exceptional_index(5.0), 0);
}

TEST(SpecFun, PfaffianSquaresToDeterminant) {
    Eigen::MatrixXd a(6, 6);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    a.setZero();
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) {
            a(i, j) = g(rng);
            a(j, i) = -a(i, j);
        }
    double pf = pfaffian(a);
    EXPECT_NEAR(pf * pf, a.determinant(), 1e-10 * std::abs(a.determinant()));
    Eigen::MatrixXd b(2, 2);
    b << 0, 3, -3, 0;
    EXPECT_DOUBLE_EQ(pfaffian(b), 3.0);
}

TEST(SpecFun, CrossRatio) {
    EXPECT_DOUBLE_EQ(cross_ratio(0, 1, 2, 3), 0.25);
    EXPECT_NEAR(cross_ratio(0, 1, std::sqrt(2.0), 1 + std::sqrt(2.0)), 0.5, 1e-15);
    EXPECT_THROW(cross_ratio(0, 2, 1, 3), std::invalid_argument);
}
