#include <benchmark/benchmark.h>

#include "msle/linkpat.hpp"
#include "msle/partition.hpp"
#include "msle/sle.hpp"
#include "msle/specfun.hpp"

using namespace msle;

static void BM_Hyp2f1(benchmark::State& st) {
    double z = 0.1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(hyp2f1(0.8, 0.2, 1.6, z));
        z = z < 0.9 ? z + 0.01 : 0.1;
    }
}
BENCHMARK(BM_Hyp2f1);

static void BM_MeanderMatrix(benchmark::State& st) {
    int n = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(meander_matrix(n, 1.3).determinant());
}
BENCHMARK(BM_MeanderMatrix)->DenseRange(2, 6);

static void BM_CoulombF_N2(benchmark::State& st) {
    std::vector<double> x{0, 1, 2.5, 4};
    auto beta = LinkPattern::parse("1-4.2-3");
    for (auto _ : st) benchmark::DoNotOptimize(coulomb_F(5.0, beta, x).value);
}
BENCHMARK(BM_CoulombF_N2)->Unit(benchmark::kMillisecond);

static void BM_PureZ_N2(benchmark::State& st) {
    std::vector<double> x{0, 1, 2.5, 4};
    auto a = LinkPattern::parse("1-2.3-4");
    for (auto _ : st) benchmark::DoNotOptimize(pure_Z(5.0, a, x).value);
}
BENCHMARK(BM_PureZ_N2);

static void BM_PartitionDrift(benchmark::State& st) {
    auto a = LinkPattern::parse("1-4.2-3");
    for (auto _ : st) benchmark::DoNotOptimize(sle::partition_drift(5.0, a, {0.0, 1.0, 2.5, 4.0}, 0));
}
BENCHMARK(BM_PartitionDrift);

static void BM_ChordalRun(benchmark::State& st) {
    sle::SimOptions o;
    o.t_max = 1.0;
    o.probes = {-1.0, 1.0};
    std::uint64_t c = 0;
    for (auto _ : st) benchmark::DoNotOptimize(sle::simulate(sle::DriftSpec{}, 6.0, {0.0}, 0, o, 1, c++).W);
}
BENCHMARK(BM_ChordalRun)->Unit(benchmark::kMicrosecond);

static void BM_Percolation(benchmark::State& st) {
    std::vector<double> x{0, 1, 2, 3};
    for (auto _ : st) benchmark::DoNotOptimize(sle::percolation_crossing_mc(x, 0.05, 30, 20, 1).estimate);
}
BENCHMARK(BM_Percolation)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
