#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "msle/linkpat.hpp"

namespace msle {

struct CheckReport {
    std::string name;
    std::string inputs;
    double measured = 0;
    double reference = 0;
    double tol = 0;
    bool relative = true;
    bool pass = false;
};

// pass flag from |measured - reference| against tol (scaled by |reference| when relative)
CheckReport make_report(std::string name, std::string inputs, double measured, double reference, double tol,
                        bool relative);

using Evaluator = std::function<double(const std::vector<double>&)>;
using PatternEvaluator = std::function<double(const LinkPattern&, const std::vector<double>&)>;

double min_gap(const std::vector<double>& x);
// x_1 = 0, gaps uniform in [lo, hi]
std::vector<double> random_config(int n_points, std::mt19937_64& rng, double lo = 0.5, double hi = 2.0);
std::string fmt_points(const std::vector<double>& x);

struct Residual {
    double residual = 0;  // after Richardson, normalized by the largest term
    double coarse = 0;    // step h only
    double max_term = 0;
};

// (kappa/2) d_j^2 F + sum_{i!=j} [2/(x_i-x_j) d_i F - 2h/(x_i-x_j)^2 F]; step 0 means 1e-3 * min gap
Residual bpz_residual(const Evaluator& F, double kappa, const std::vector<double>& x, int j, double step = 0);

// z -> (a z + b)/(c z + d), ad - bc > 0
struct Mobius {
    double a = 1, b = 0, c = 0, d = 1;
    double operator()(double z) const { return (a * z + b) / (c * z + d); }
    double deriv(double z) const { return (a * d - b * c) / ((c * z + d) * (c * z + d)); }
};

// F_beta(x) vs prod phi'(x_i)^h F_{phi(beta)}(phi(x)), cyclic relabelling when phi moves points past infinity
CheckReport mobius_check(const PatternEvaluator& F, double kappa, const LinkPattern& beta, const Mobius& phi,
                         const std::vector<double>& x, double tol = 1e-5);

struct AsyResult {
    CheckReport report;            // extrapolated limit vs reference
    std::vector<double> separations;
    std::vector<double> ratios;    // F * s^{2h}
    double raw_rel_error = 0;      // at the smallest separation
    double slope = 0;              // log-log slope of |ratio - reference|
    double expected_slope = 0;
};

// x_other: the 2N-2 points other than x_j, x_{j+1}; the pair is placed at xi -+ s/2.
// Reference nu F_{beta/{j,j+1}} (linked) or F_{tie_j(beta)/{j,j+1}}; at kappa = 8/(2m+1) the renormalized
// function is used and the linked reference is 0.
AsyResult asy_check(double kappa, const LinkPattern& beta, int j, double xi, const std::vector<double>& x_other,
                    const std::vector<double>& separations, double tol = 0.01);

struct FrobTerm {
    double exponent = 0;
    int log_power = 0;  // multiplies by |log s|^log_power
};
struct FrobFit {
    std::vector<double> coef;
    double residual = 0;  // relative rms
    double condition = 0;
};
FrobFit frobenius_fit(const std::vector<double>& s, const std::vector<double>& values, const std::vector<FrobTerm>& terms);
// log-spaced separations in [lo, hi]
std::vector<double> geometric_separations(double lo, double hi, int count);

// third-order operator applied to the N=2 fused function F_{rainbow/v1}(xi, x3, x4); kappa = 4 uses the rational form
Residual third_pde_residual(double kappa, double xi, const std::vector<double>& x_rest, double step = 0);

struct BraidCheck {
    std::complex<double> ratio;
    std::complex<double> expected;
    double deviation = 0;
};
BraidCheck braid_phase(double kappa, const LinkPattern& beta, const std::vector<double>& x);

// Z_alpha(x) / prod |x_j - x_i|^{mu_ij}
double refined_bound_ratio(double kappa, const LinkPattern& alpha, const std::vector<double>& x);
// Z_alpha(x) / prod_{a,b} H(x_a, x_b)^h
double strong_bound_ratio(double kappa, const LinkPattern& alpha, const std::vector<double>& x);

// suites: identities, pde, asy, frobenius, renorm, braid, bounds, all
std::vector<std::string> suite_names();
std::vector<CheckReport> run_suite(const std::string& name, std::uint64_t seed = 1);

}  // namespace msle
