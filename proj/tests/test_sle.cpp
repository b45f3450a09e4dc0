#include <gtest/gtest.h>

#include <cmath>

#include "msle/sle.hpp"

using namespace msle;
using namespace msle::sle;

TEST(Sle, ZeroTimeIsIdentity) {
    SimOptions o;
    o.t_max = 0;
    o.probes = {-2.5, 4.0};
    auto tr = simulate(DriftSpec{}, 3.0, {-1.0, 0.5, 2.0}, 1, o, 7);
    EXPECT_EQ(tr.stop, "t_max");
    EXPECT_EQ(tr.W, 0.0);
    EXPECT_DOUBLE_EQ(tr.points[0].image, -1.5);
    EXPECT_DOUBLE_EQ(tr.points[2].image, 1.5);
    EXPECT_DOUBLE_EQ(tr.points[3].image, -3.0);
    EXPECT_DOUBLE_EQ(tr.points[4].image, 3.5);
}

TEST(Sle, Deterministic) {
    SimOptions o;
    o.t_max = 2.0;
    o.probes = {3.0, -3.0};
    auto a = simulate(DriftSpec{}, 6.0, {-1.0, 0.0, 1.0}, 1, o, 42, 3);
    auto b = simulate(DriftSpec{}, 6.0, {-1.0, 0.0, 1.0}, 1, o, 42, 3);
    auto c = simulate(DriftSpec{}, 6.0, {-1.0, 0.0, 1.0}, 1, o, 42, 4);
    EXPECT_EQ(a.W, b.W);
    EXPECT_EQ(a.steps, b.steps);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_EQ(a.points[i].image, b.points[i].image);
        EXPECT_EQ(a.points[i].tau, b.points[i].tau);
    }
    EXPECT_NE(a.W, c.W);
}

TEST(Sle, FlowComposition) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    double dt = 1e-4;
    std::vector<double> w{0.0};
    for (int k = 0; k < 2000; ++k) w.push_back(w.back() + std::sqrt(2.0 * dt) * g(rng));
    std::vector<double> y{-3.0, -1.0, 1.5, 4.0};
    auto full = flow_points(w, dt, y);
    std::vector<double> w1(w.begin(), w.begin() + 801), w2(w.begin() + 800, w.end());
    auto two = flow_points(w2, dt, flow_points(w1, dt, y));
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_EQ(full[i], two[i]);
}

TEST(Sle, FlowMatchesCapacityForConstantDriving) {
    // W = 0: g_t(x) = sign(x) sqrt(x^2 + 4t), exactly
    double dt = 1e-3;
    std::vector<double> w(1001, 0.0);
    auto g = flow_points(w, dt, {-2.0, 0.5});
    EXPECT_NEAR(g[0], -std::sqrt(4.0 + 4.0), 1e-12);
    EXPECT_NEAR(g[1], std::sqrt(0.25 + 4.0), 1e-12);
}

TEST(Sle, FlowRefinementConverges) {
    // the same Brownian path sampled at dt and dt/2 gives images within O(dt)
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    double dt = 1e-4;
    std::vector<double> fine{0.0};
    for (int k = 0; k < 4000; ++k) fine.push_back(fine.back() + std::sqrt(3.0 * dt / 2) * g(rng));
    std::vector<double> coarse;
    for (std::size_t k = 0; k < fine.size(); k += 2) coarse.push_back(fine[k]);
    std::vector<double> y{-2.0, 2.0};
    auto a = flow_points(fine, dt / 2, y), b = flow_points(coarse, dt, y);
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(a[i], b[i], 0.05);
}

TEST(Sle, SwallowTimesMonotoneOnEachSide) {
    DriftSpec d;
    SimOptions o;
    for (double p = 0.25; p < 8; p *= 1.5) {
        o.probes.push_back(p);
        o.probes.push_back(-p);
    }
    o.t_max = 20.0;
    for (std::uint64_t c = 0; c < 40; ++c) {
        auto tr = simulate(d, 6.0, {0.0}, 0, o, 9, c);
        for (std::size_t i = 3; i < tr.points.size(); i += 2) {
            EXPECT_LE(tr.points[i - 2].tau, tr.points[i].tau);      // right side
            EXPECT_LE(tr.points[i - 1].tau, tr.points[i + 1].tau);  // left side
        }
    }
}

TEST(Sle, SimpleCurvesSwallowNothing) {
    SimOptions o;
    o.t_max = 5.0;
    o.probes = {0.5, 1.0, -0.5};
    for (std::uint64_t c = 0; c < 10; ++c) {
        auto tr = simulate(DriftSpec{}, 2.5, {0.0}, 0, o, 11, c);
        for (std::size_t i = 1; i < tr.points.size(); ++i) EXPECT_FALSE(tr.points[i].swallowed);
    }
}

TEST(Sle, OffsetsFromInnermostPoint) {
    SimOptions o;
    o.t_max = 1.0;
    o.probes = {1.0, 1.2, 3.0, -0.7, -2.0};
    auto tr = simulate(DriftSpec{}, 3.0, {0.0}, 0, o, 5, 1);
    EXPECT_EQ(tr.points[1].offset, 0.0);
    EXPECT_NEAR(tr.points[2].offset, tr.points[2].image - tr.points[1].image, 1e-12);
    EXPECT_NEAR(tr.points[3].offset, tr.points[3].image - tr.points[1].image, 1e-12);
    EXPECT_NEAR(tr.points[5].offset, tr.points[5].image - tr.points[4].image, 1e-12);
    EXPECT_GT(tr.points[2].offset, 0.0);
    EXPECT_LT(tr.points[5].offset, 0.0);
}

TEST(Sle, PartitionDriftN1IsKappaRhoSix) {
    LinkPattern a({{1, 2}});
    for (double k : {2.0, 4.0, 6.0, 7.5})
        for (double x : {0.3, 2.0, -1.7}) {
            std::vector<double> y = x > 0 ? std::vector<double>{0.0, x} : std::vector<double>{x, 0.0};
            int seed = x > 0 ? 0 : 1;
            EXPECT_NEAR(partition_drift(k, a, y, seed), (6.0 - k) / x, 1e-12) << k << " " << x;
        }
}

TEST(Sle, PartitionDriftMergedPairFactorsOut) {
    LinkPattern p = LinkPattern::parse("1-2.3-4");
    double tiny = std::nextafter(2.0, 3.0);
    double merged = partition_drift(5.0, p, {0.0, 1.0, 2.0, tiny}, 0);
    EXPECT_NEAR(merged, (6.0 - 5.0) / 1.0, 1e-12);
}

TEST(Sle, PartitionDriftHandlesInfinity) {
    LinkPattern p = LinkPattern::parse("1-4.2-3");
    double inf = std::numeric_limits<double>::infinity();
    double d = partition_drift(5.0, p, {0.0, 1.0, 2.0, inf}, 0);
    EXPECT_TRUE(std::isfinite(d));
    // far-away x4: the N=1 rainbow limit, SLE(kappa; rho) with weights at x2, x3 cancelling to leading order
    double near = partition_drift(5.0, p, {0.0, 1.0, 2.0, 1e7}, 0);
    EXPECT_NEAR(d, near, 1e-5);
}

TEST(Sle, RhoZeroSmallSample) {
    auto r = rho_zero_experiment(4.0, 400, 3);
    EXPECT_GT(r.ks.p_value, 1e-3);
}

TEST(Sle, Preconditions) {
    EXPECT_THROW(hitting_order_mc(4.0, {0, 1, 2, 3}, 10, 1), std::invalid_argument);
    EXPECT_THROW(resampling_experiment(5.0, LinkPattern::parse("1-2.3-4"), {0, 1, 2, 3}, 100, 1),
                 std::invalid_argument);
    EXPECT_THROW(percolation_crossing_mc({0, 1, 2, 3}, 0.2, 30, 10, 1), std::invalid_argument);
    EXPECT_THROW(percolation_crossing_mc({0, 1, 2, 3}, 0.05, 20, 10, 1), std::invalid_argument);
    EXPECT_THROW(simulate(DriftSpec{}, 8.0, {0.0}, 0, SimOptions{}, 1), std::invalid_argument);
    DriftSpec kr;
    kr.kind = DriftKind::KappaRho;
    kr.rho = {0.0};
    EXPECT_THROW(simulate(kr, 3.0, {0.0, 1.0}, 0, SimOptions{}, 1), std::invalid_argument);
}

TEST(Sle, ContinuationThreshold) {
    DriftSpec kr;
    kr.kind = DriftKind::KappaRho;
    kr.rho = {0.0, -2.5};
    SimOptions o;
    o.t_max = 50.0;
    int stopped = 0;
    for (std::uint64_t c = 0; c < 20; ++c) {
        auto tr = simulate(kr, 6.0, {0.0, 1.0}, 0, o, 13, c);
        stopped += tr.stop == "continuation";
    }
    EXPECT_GT(stopped, 0);
}

TEST(Sle, KsTwoSample) {
    std::vector<double> a, b;
    for (int i = 0; i < 1000; ++i) {
        a.push_back(i / 1000.0);
        b.push_back((i + 0.5) / 1000.0);
    }
    EXPECT_GT(ks_two_sample(a, b).p_value, 0.99);
    for (auto& v : b) v += 0.3;
    EXPECT_LT(ks_two_sample(a, b).p_value, 1e-10);
    EXPECT_NEAR(kolmogorov_q(1.36), 0.0494, 5e-4);
}

TEST(Sle, PercolationMonotoneInCrossRatio) {
    std::vector<double> est;
    for (double chi : {0.2, 0.5, 0.8}) {
        double u = 2 * chi / (1 + chi);
        est.push_back(percolation_crossing_mc({0, u, 1, 2}, u / 20, 20, 400, 17).estimate);
    }
    EXPECT_GT(est[0], est[1]);
    EXPECT_GT(est[1], est[2]);
}
