#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "msle/linkpat.hpp"

namespace msle::sle {

enum class DriftKind { Chordal, KappaRho, Partition };

struct DriftSpec {
    DriftKind kind = DriftKind::Chordal;
    std::vector<double> rho;  // KappaRho: one weight per boundary point, the seed entry is ignored
    LinkPattern alpha;        // Partition: pattern over the boundary points (N = 1, 2)
};

struct SimOptions {
    double dt = 1e-3;   // relative step: dt_k = dt * (distance from W to the nearest active point)^2
    double t_max = std::numeric_limits<double>::infinity();
    double eta = 2e-3;  // near-collision scale for the Bessel hit/escape decision
    long max_steps = 20000000;
    std::vector<double> probes;  // extra tracked boundary points (no weight)
    std::vector<int> stop_on;    // stop as soon as any of these tracked labels is swallowed
};

struct TrackedPoint {
    double x = 0;          // initial position (+inf allowed for Partition)
    double image = 0;      // g_t(x) - W_t
    double offset = 0;     // live points: g_t(x) minus g_t of the innermost live point on the same side
    bool swallowed = false;
    double tau = std::numeric_limits<double>::infinity();
    long event = -1;       // swallow event id; equal ids = swallowed in the same step
};

// Labels: boundary points by index in x (the seed included, always swallowed at t = 0), then probes.
struct Trajectory {
    double t = 0;
    double W = 0;
    std::vector<TrackedPoint> points;
    long steps = 0;
    long shortcuts = 0;
    long events = 0;
    std::string stop;  // stop-set | t_max | target | continuation | no-points | max_steps | anomaly
};

// kappa d/dx_k log Z_alpha at the images y (N = 1, 2); +inf entries are placed far out
double partition_drift(double kappa, const LinkPattern& alpha, std::vector<double> y, int k);

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t chain);

// Loewner chain from x[seed_label]; dW = sqrt(kappa) dB + drift dt, tracked images by the square-root map.
Trajectory simulate(const DriftSpec& drift, double kappa, const std::vector<double>& x, int seed_label,
                    const SimOptions& opt, std::mt19937_64& rng);
Trajectory simulate(const DriftSpec& drift, double kappa, const std::vector<double>& x, int seed_label,
                    const SimOptions& opt, std::uint64_t seed, std::uint64_t chain = 0);

// images g(y) after running the square-root map along a fixed driving sequence W_0, W_1, ... with step dt
std::vector<double> flow_points(const std::vector<double>& w, double dt, const std::vector<double>& y);

struct KsResult {
    double statistic = 0;
    double p_value = 0;
};
double kolmogorov_q(double lambda);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_normal(std::vector<double> a);

struct RhoZeroResult {
    std::vector<double> samples;  // W_{t_max} / sqrt(kappa t_max)
    KsResult ks;
};
RhoZeroResult rho_zero_experiment(double kappa, int n_samples, std::uint64_t seed, double dt = 1e-3);

struct ResamplingResult {
    std::vector<double> route_a;
    std::vector<double> route_b;
    KsResult ks;
    long anomalies = 0;  // samples redrawn after a forbidden swallow
    std::vector<double> frame;  // Moebius image of x with x_4 sent to infinity
};
// alpha in {1-2.3-4, 1-4.2-3}, x with 4 points. Observable: number of probes on the far side of the
// infinite curve swallowed together with the nearest probe.
ResamplingResult resampling_experiment(double kappa, const LinkPattern& alpha, const std::vector<double>& x,
                                       int n_samples, std::uint64_t seed, double dt = 1e-3);

struct McEstimate {
    double estimate = 0;
    double stderr_ = 0;
    long n = 0;
    long hits = 0;
    std::vector<double> samples;  // per-sample event indicator, in chain order
};

struct HittingResult {
    McEstimate coarse;   // at dt
    McEstimate refined;  // at dt / 2, eta / 2
    McEstimate value;    // refined estimate, reported
};
// P[tau(x2) = tau(x3)] for chordal SLE from x1 to x4, kappa in (4,8)
HittingResult hitting_order_mc(double kappa, const std::vector<double>& x, int n_samples, std::uint64_t seed,
                               double dt = 1e-3);

// Critical site percolation on the triangular lattice in the half-disk centred at (x1 + x4)/2.
// Estimate: probability that no open cluster joins (x1,x2) to (x3,x4), i.e. an open crossing joins (x2,x3)
// to the rest of the boundary. x4 = +inf: (x3,x4) is the diameter to the right of x3 and the centre is (x1+x3)/2.
McEstimate percolation_crossing_mc(const std::vector<double>& x, double mesh, double radius, int n_samples,
                                   std::uint64_t seed);

// Gamma(2/3)/Gamma(1/3)^2 int_chi^1 u^{-2/3}(1-u)^{-2/3} du
double cardy_value(double chi);

}  // namespace msle::sle
