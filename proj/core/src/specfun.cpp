#include "msle/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>

namespace msle {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos, g = 7, n = 9
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(double x) {
    return x <= 0 && x == std::floor(x);
}

double digamma(double x) { return boost::math::digamma(x); }

// plain Gauss series, |z| <= 1/2 in practice
double series(double a, double b, double c, double z) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < 2000; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            if (n > 3) break;
        }
        if (term == 0.0) break;
    }
    return sum;
}

double gauss_at_one(double a, double b, double c) {
    double s = c - a - b;
    if (s <= 0) throw std::domain_error("hyp2f1: divergent at z=1 (c-a-b <= 0)");
    return gamma_fn(c) * gamma_fn(s) * rgamma(c - a) * rgamma(c - b);
}

// A&S 15.3.10 and 15.3.11: c = a + b + m with integer m >= 0
double log_case(double a, double b, int m, double z) {
    double w = 1.0 - z;
    double lw = std::log(w);
    double c = a + b + m;
    double total = 0.0;
    if (m > 0) {
        double pre = gamma_fn(m) * gamma_fn(c) * rgamma(a + m) * rgamma(b + m);
        double t = 1.0;
        double s = 0.0;
        for (int n = 0; n < m; ++n) {
            s += t;
            if (n + 1 < m) t *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - m + n)) * w;
        }
        total += pre * s;
    }
    double pre2 = gamma_fn(c) * rgamma(a) * rgamma(b);
    if (pre2 == 0.0) return total;
    double sgn = (m % 2 == 0) ? 1.0 : -1.0;
    // coefficient (a+m)_n (b+m)_n / (n! (n+m)!) w^n
    double coef = 1.0 / std::tgamma(m + 1.0);
    double s = 0.0;
    for (int n = 0; n < 4000; ++n) {
        double br = lw - digamma(n + 1.0) - digamma(n + m + 1.0) + digamma(a + n + m) +
                    digamma(b + n + m);
        double term = coef * br;
        s += term;
        if (n > 3 && std::abs(term) <= 1e-17 * std::abs(s)) break;
        coef *= (a + m + n) * (b + m + n) / ((n + 1.0) * (n + m + 1.0)) * w;
        if (coef == 0.0) break;
    }
    // m = 0 reduces to 15.3.10 with the overall sign folded in
    total -= pre2 * sgn * std::pow(w, m) * s;
    return total;
}

double connection(double a, double b, double c, double z) {
    double s = c - a - b;
    double w = 1.0 - z;
    double ga = gamma_fn(c) * gamma_fn(s) * rgamma(c - a) * rgamma(c - b);
    double gb = gamma_fn(c) * gamma_fn(-s) * rgamma(a) * rgamma(b);
    double v = 0.0;
    if (ga != 0.0) v += ga * series(a, b, 1.0 - s, w);
    if (gb != 0.0) v += gb * std::pow(w, s) * series(c - a, c - b, s + 1.0, w);
    return v;
}

}  // namespace

int exceptional_index(double kappa, double tol) {
    if (kappa <= 0) return 0;
    double m = 8.0 / kappa;
    double r = std::round(m);
    if (r >= 1 && std::abs(m - r) <= tol * std::max(1.0, r)) return static_cast<int>(r);
    return 0;
}

LnGamma ln_gamma(double x) {
    if (is_nonpositive_integer(x)) throw std::domain_error("ln_gamma: pole at nonpositive integer");
    if (x < 0.5) {
        double s = std::sin(kPi * x);
        LnGamma r = ln_gamma(1.0 - x);
        return {std::log(kPi / std::abs(s)) - r.value, s > 0 ? 1 : -1};
    }
    double y = x - 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (y + i);
    double t = y + kLanczosG + 0.5;
    double v = 0.5 * std::log(2.0 * kPi) + (y + 0.5) * std::log(t) - t + std::log(acc);
    return {v, 1};
}

double gamma_fn(double x) {
    if (is_nonpositive_integer(x)) throw std::domain_error("gamma: pole at nonpositive integer");
    if (x == std::floor(x) && x <= 20) {
        double f = 1.0;
        for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
        return f;
    }
    LnGamma g = ln_gamma(x);
    return g.sign * std::exp(g.value);
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    return 1.0 / gamma_fn(x);
}

double nu_over_c(double kappa) {
    if (kappa <= 0) throw std::domain_error("kappa must be positive");
    double r = rgamma(4.0 / kappa);
    return 4.0 * kPi * kPi * r * r * rgamma(2.0 - 8.0 / kappa);
}

KappaParams kappa_params(double kappa) {
    if (!(kappa > 0)) throw std::domain_error("kappa must be positive");
    KappaParams p;
    p.kappa = kappa;
    p.h = (6.0 - kappa) / (2.0 * kappa);
    p.c = (3.0 * kappa - 8.0) * (6.0 - kappa) / (2.0 * kappa);
    p.q = std::polar(1.0, 4.0 * kPi / kappa);
    p.alpha0 = (kappa - 4.0) / (4.0 * std::sqrt(kappa));
    p.alpha_minus = -2.0 / std::sqrt(kappa);
    p.alpha_plus = std::sqrt(kappa) / 2.0;
    p.alpha12 = 1.0 / std::sqrt(kappa);
    int m = exceptional_index(kappa);
    p.exceptional = m != 0;
    double s = std::sin(4.0 * kPi / kappa);
    if (m == 0) {
        p.nu = -2.0 * std::cos(4.0 * kPi / kappa);
        p.big_c = p.nu / nu_over_c(kappa);
        p.big_c_hat = 4.0 * s * s * p.big_c;
    } else {
        if (m % 2 == 0) p.nu = (m % 4 == 0) ? -2.0 : 2.0;
        else p.nu = 0.0;
        if (m == 1) {
            p.big_c = 0.0;
            p.big_c_hat = 0.0;
        } else if (m % 2 == 1) {
            int k = (m - 1) / 2;
            double g = gamma_fn(0.5 - k);
            double sign = (k % 2 == 0) ? 1.0 : -1.0;
            p.big_c = sign * kPi / (std::tgamma(2.0 * k) * 4.0 * g * g);
            p.big_c_hat = 4.0 * p.big_c;
        } else {
            p.c_defined = false;
            p.big_c = std::numeric_limits<double>::quiet_NaN();
            p.big_c_hat = 0.0;
        }
    }
    return p;
}

double hyp2f1(double a, double b, double c, double z) {
    if (is_nonpositive_integer(c)) throw std::domain_error("hyp2f1: c is a nonpositive integer");
    if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("hyp2f1: z outside [0,1]");
    if (z == 0.0) return 1.0;
    // terminating series
    for (double p : {a, b}) {
        if (is_nonpositive_integer(p)) {
            int n = static_cast<int>(-p);
            double term = 1.0, sum = 1.0;
            for (int k = 0; k < n; ++k) {
                term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
                sum += term;
            }
            return sum;
        }
    }
    if (z == 1.0) return gauss_at_one(a, b, c);
    if (z <= 0.5) return series(a, b, c, z);
    double s = c - a - b;
    double r = std::round(s);
    if (std::abs(s - r) < 1e-13) {
        int m = static_cast<int>(r);
        if (m >= 0) return log_case(a, b, m, z);
        // Euler: F(a,b;c;z) = (1-z)^{c-a-b} F(c-a,c-b;c;z)
        return std::pow(1.0 - z, s) * log_case(c - a, c - b, -m, z);
    }
    if (std::abs(s - r) < 1e-6) {
        double d = 1e-4;
        return 0.5 * (connection(a, b, c + d, z) + connection(a, b, c - d, z));
    }
    return connection(a, b, c, z);
}

double hyp2f1_dz(double a, double b, double c, double z) {
    return a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z);
}

namespace {

double pf_rec(const Eigen::MatrixXd& a, std::vector<int>& idx) {
    if (idx.empty()) return 1.0;
    int i0 = idx[0];
    double total = 0.0;
    for (std::size_t j = 1; j < idx.size(); ++j) {
        double aij = a(i0, idx[j]);
        if (aij == 0.0) continue;
        std::vector<int> rest;
        rest.reserve(idx.size() - 2);
        for (std::size_t k = 1; k < idx.size(); ++k)
            if (k != j) rest.push_back(idx[k]);
        double sign = (j % 2 == 1) ? 1.0 : -1.0;
        total += sign * aij * pf_rec(a, rest);
    }
    return total;
}

}  // namespace

double pfaffian(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("pfaffian: matrix not square");
    if (a.rows() % 2 != 0) throw std::invalid_argument("pfaffian: odd dimension");
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("pfaffian: matrix not antisymmetric");
    if (a.rows() > 12) throw std::invalid_argument("pfaffian: dimension above 12");
    std::vector<int> idx(a.rows());
    for (int i = 0; i < a.rows(); ++i) idx[i] = i;
    return pf_rec(a, idx);
}

double cross_ratio(double x1, double x2, double x3, double x4) {
    if (!(x1 < x2 && x2 < x3 && x3 < x4)) throw std::invalid_argument("cross_ratio: points not sorted");
    return (x2 - x1) * (x4 - x3) / ((x3 - x1) * (x4 - x2));
}

double half_plane_poisson(double x, double y) {
    if (x == y) throw std::invalid_argument("half_plane_poisson: coincident points");
    double d = y - x;
    return 1.0 / (d * d);
}

}  // namespace msle
