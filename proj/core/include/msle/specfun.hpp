#pragma once

#include <complex>

#include <Eigen/Dense>

namespace msle {

// Constants derived from kappa. big_c and big_c_hat are the continuous
// extensions; c_defined is false where C(kappa) has a pole (kappa = 8/m, m even).
struct KappaParams {
    double kappa = 0;
    double h = 0;
    double c = 0;
    double nu = 0;
    double big_c = 0;
    double big_c_hat = 0;
    bool c_defined = true;
    bool exceptional = false;  // kappa = 8/m
    std::complex<double> q;
    double alpha0 = 0;
    double alpha_minus = 0;
    double alpha_plus = 0;
    double alpha12 = 0;
};

KappaParams kappa_params(double kappa);

// nu(kappa)/C(kappa) = 4 pi^2 / (Gamma(4/k)^2 Gamma(2-8/k)); entire in 1/kappa.
double nu_over_c(double kappa);

// If kappa = 8/m within tol, returns m, else 0.
int exceptional_index(double kappa, double tol = 1e-12);

struct LnGamma {
    double value;
    int sign;
};

LnGamma ln_gamma(double x);
double gamma_fn(double x);
double rgamma(double x);  // 1/Gamma, zero at the poles

double hyp2f1(double a, double b, double c, double z);
double hyp2f1_dz(double a, double b, double c, double z);

double pfaffian(const Eigen::MatrixXd& a);

double cross_ratio(double x1, double x2, double x3, double x4);
double half_plane_poisson(double x, double y);

}  // namespace msle
