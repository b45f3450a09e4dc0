#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "msle/linkpat.hpp"

namespace msle {

struct PartitionValue {
    double value = 0;
    double abs_error = 0;
    std::string method;  // contour | line | closed-form | meander-solve | extrapolated
    double kappa = 0;
};

void check_config(const std::vector<double>& x, int n_links);

enum class FRoute { Auto, Contour, Line };

// F_beta = C^N H_beta; Richardson extrapolation in kappa near 8/m.
PartitionValue coulomb_F(double kappa, const LinkPattern& beta, const std::vector<double>& x,
                         FRoute route = FRoute::Auto, double rel_tol = 1e-10);
// All Catalan(N) patterns in enumerate_patterns order.
std::vector<PartitionValue> coulomb_F_all(double kappa, int n, const std::vector<double>& x,
                                          FRoute route = FRoute::Auto);

// kappa in {3, 16/3, 6}
double closed_F_special(double kappa, const LinkPattern& beta, const std::vector<double>& x);

PartitionValue pure_Z(double kappa, const LinkPattern& alpha, const std::vector<double>& x);
std::vector<PartitionValue> pure_Z_all(double kappa, int n, const std::vector<double>& x);
double pure_Z_N2(double kappa, bool rainbow, const std::vector<double>& x);
// gradient of log Z_alpha, N = 1 or 2
std::vector<double> pure_Z_log_grad(double kappa, const LinkPattern& alpha, const std::vector<double>& x);

double conformal_block_U(const LinkPattern& gamma, const std::vector<double>& x);
double pure_Z_kappa4(const LinkPattern& alpha, const std::vector<double>& x);
Eigen::MatrixXd incidence_inverse(int n);

struct RenormValue {
    PartitionValue value;       // reported value
    PartitionValue limit;       // limit route
    PartitionValue meander;     // renormalized-meander route (absent: method empty)
    double rel_diff = 0;
};

// limit_route = false skips the kappa-extrapolation when the meander route exists (N <= 2)
RenormValue fhat_odd(double kappa, const LinkPattern& beta, const std::vector<double>& x, bool limit_route = true);
RenormValue fhat_eight(const LinkPattern& beta, const std::vector<double>& x, bool limit_route = true);
PartitionValue zhat_eight(const LinkPattern& alpha, const std::vector<double>& x);

double z_three(double kappa, double xi, double x3, double x4);
// fused function; x_rest = (x_3, ..., x_2N)
double fused_F(double kappa, const LinkPattern& beta, double xi, const std::vector<double>& x_rest);
double fused_F_kappa4(const LinkPattern& beta, double xi, const std::vector<double>& x_rest);

double sign_ratio_G(double kappa, double z);
double sign_structure_N2(double kappa);

}  // namespace msle
