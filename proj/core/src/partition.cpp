#include "msle/partition.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "msle/contour.hpp"
#include "msle/specfun.hpp"

namespace msle {

namespace {

constexpr double kPi = std::numbers::pi;

double hh(double kappa) { return (6.0 - kappa) / (2.0 * kappa); }

double f21_one(double kappa) { return hyp2f1(4.0 / kappa, 1.0 - 4.0 / kappa, 8.0 / kappa, 1.0); }

// m with |kappa - 8/m| < tol, m >= 2; 0 otherwise
int near_exceptional(double kappa, double tol) {
    int m = static_cast<int>(std::lround(8.0 / kappa));
    if (m >= 2 && std::abs(kappa - 8.0 / m) < tol) return m;
    return 0;
}

PartitionValue f_direct(double kappa, const LinkPattern& beta, const std::vector<double>& x, FRoute route,
                        double rel_tol) {
    int n = beta.n();
    PartitionValue out;
    out.kappa = kappa;
    if (route == FRoute::Auto) {
        if (n == 1) {
            out.value = -2.0 * std::cos(4.0 * kPi / kappa) * std::pow(x[1] - x[0], -2.0 * hh(kappa));
            out.method = "closed-form";
            return out;
        }
        route = (kappa > 4 && kappa < 8 && line_form_available(beta, LineForm::Auto)) ? FRoute::Line
                                                                                        : FRoute::Contour;
    }
    if (route == FRoute::Line) {
        auto v = coulomb_H_line(kappa, beta, x, LineForm::Auto, std::min(rel_tol, 1e-11));
        out.value = v.value;
        out.abs_error = v.abs_error;
        out.method = "line";
        return out;
    }
    auto kp = kappa_params(kappa);
    if (!kp.c_defined) throw std::domain_error("coulomb_F: C(kappa) has a pole; use the extrapolated route");
    auto h = coulomb_H(kappa, beta, x, HRoute::Auto, rel_tol);
    double cn = std::pow(kp.big_c, n);
    out.value = cn * h.value.real();
    out.abs_error = std::abs(cn) * h.abs_error;
    out.method = "contour";
    return out;
}

}  // namespace

void check_config(const std::vector<double>& x, int n_links) {
    if (static_cast<int>(x.size()) != 2 * n_links)
        throw std::invalid_argument("boundary point count does not match the pattern");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw std::invalid_argument("unsorted boundary points");
}

PartitionValue coulomb_F(double kappa, const LinkPattern& beta, const std::vector<double>& x, FRoute route,
                         double rel_tol) {
    if (!(kappa > 0 && kappa < 8)) throw std::invalid_argument("coulomb_F: kappa outside (0,8)");
    check_config(x, beta.n());
    bool closed_n1 = beta.n() == 1 && route == FRoute::Auto;
    if (!closed_n1 && near_exceptional(kappa, 1e-3)) {
        auto sym = [&](double d) {
            return 0.5 * (f_direct(kappa + d, beta, x, route, rel_tol).value +
                          f_direct(kappa - d, beta, x, route, rel_tol).value);
        };
        double s2 = sym(0.02), s1 = sym(0.01);
        PartitionValue out;
        out.kappa = kappa;
        out.value = (4.0 * s1 - s2) / 3.0;
        out.abs_error = std::abs(out.value - s1) / 15.0 + 1e-12 * std::abs(s1);
        out.method = "extrapolated";
        return out;
    }
    return f_direct(kappa, beta, x, route, rel_tol);
}

std::vector<PartitionValue> coulomb_F_all(double kappa, int n, const std::vector<double>& x, FRoute route) {
    std::vector<PartitionValue> out;
    for (const auto& b : enumerate_patterns(n)) out.push_back(coulomb_F(kappa, b, x, route));
    return out;
}

double closed_F_special(double kappa, const LinkPattern& beta, const std::vector<double>& x) {
    check_config(x, beta.n());
    int n2 = static_cast<int>(x.size());
    if (std::abs(kappa - 6.0) < 1e-12) return 1.0;
    if (std::abs(kappa - 3.0) < 1e-12) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n2, n2);
        for (int i = 0; i < n2; ++i)
            for (int j = 0; j < n2; ++j)
                if (i != j) a(i, j) = 1.0 / (x[j] - x[i]);
        return pfaffian(a);
    }
    if (std::abs(kappa - 16.0 / 3.0) < 1e-12) {
        int n = beta.n();
        const auto& l = beta.links();
        double pre = 1.0;
        for (auto [a, b] : l) pre *= std::pow(std::abs(x[b - 1] - x[a - 1]), -0.125);
        double sum = 0.0;
        for (int mask = 0; mask < (1 << n); ++mask) {
            double prod = 1.0;
            for (int s = 0; s < n; ++s)
                for (int t = s + 1; t < n; ++t) {
                    double ss = (mask >> s & 1) ? 1.0 : -1.0;
                    double st = (mask >> t & 1) ? 1.0 : -1.0;
                    double as = x[l[s].first - 1], bs = x[l[s].second - 1];
                    double at = x[l[t].first - 1], bt = x[l[t].second - 1];
                    double r = std::abs(at - as) * std::abs(bs - bt) / (std::abs(bt - as) * std::abs(bs - at));
                    prod *= std::pow(r, ss * st / 4.0);
                }
            sum += prod;
        }
        return pre * std::sqrt(sum);
    }
    throw std::invalid_argument("closed_F_special: kappa must be 3, 16/3 or 6");
}

double pure_Z_N2(double kappa, bool rainbow, const std::vector<double>& x) {
    check_config(x, 2);
    double h = hh(kappa);
    double chi = cross_ratio(x[0], x[1], x[2], x[3]);
    double a = 4.0 / kappa, b = 1.0 - 4.0 / kappa, c = 8.0 / kappa;
    double f1 = f21_one(kappa);
    if (rainbow)
        return std::pow((x[3] - x[0]) * (x[2] - x[1]), -2.0 * h) * std::pow(chi, 2.0 / kappa) * hyp2f1(a, b, c, chi) / f1;
    return std::pow((x[1] - x[0]) * (x[3] - x[2]), -2.0 * h) * std::pow(1.0 - chi, 2.0 / kappa) *
           hyp2f1(a, b, c, 1.0 - chi) / f1;
}

std::vector<double> pure_Z_log_grad(double kappa, const LinkPattern& alpha, const std::vector<double>& x) {
    check_config(x, alpha.n());
    double h = hh(kappa);
    if (alpha.n() == 1) {
        double d = x[1] - x[0];
        return {2.0 * h / d, -2.0 * h / d};
    }
    if (alpha.n() != 2) throw std::invalid_argument("pure_Z_log_grad: N must be 1 or 2");
    double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    double chi = cross_ratio(x1, x2, x3, x4);
    std::array<double, 4> dlchi = {-1.0 / (x2 - x1) + 1.0 / (x3 - x1), 1.0 / (x2 - x1) + 1.0 / (x4 - x2),
                                   -1.0 / (x4 - x3) - 1.0 / (x3 - x1), 1.0 / (x4 - x3) - 1.0 / (x4 - x2)};
    double a = 4.0 / kappa, b = 1.0 - 4.0 / kappa, c = 8.0 / kappa;
    std::vector<double> g(4, 0.0);
    bool rainbow = alpha.has_link(1, 4);
    double dchi;
    if (rainbow) {
        dchi = (2.0 / kappa) / chi + hyp2f1_dz(a, b, c, chi) / hyp2f1(a, b, c, chi);
        g[0] += 2.0 * h / (x4 - x1);
        g[3] -= 2.0 * h / (x4 - x1);
        g[1] += 2.0 * h / (x3 - x2);
        g[2] -= 2.0 * h / (x3 - x2);
    } else {
        dchi = -(2.0 / kappa) / (1.0 - chi) - hyp2f1_dz(a, b, c, 1.0 - chi) / hyp2f1(a, b, c, 1.0 - chi);
        g[0] += 2.0 * h / (x2 - x1);
        g[1] -= 2.0 * h / (x2 - x1);
        g[2] += 2.0 * h / (x4 - x3);
        g[3] -= 2.0 * h / (x4 - x3);
    }
    for (int i = 0; i < 4; ++i) g[i] += dchi * chi * dlchi[i];
    return g;
}

double conformal_block_U(const LinkPattern& gamma, const std::vector<double>& x) {
    check_config(x, gamma.n());
    int n2 = static_cast<int>(x.size());
    std::vector<int> is_a(n2 + 1, 0);
    for (auto [a, b] : gamma.links()) is_a[a] = 1;
    double lu = 0;
    for (int i = 1; i <= n2; ++i)
        for (int j = i + 1; j <= n2; ++j) {
            double lam = is_a[i] == is_a[j] ? 1.0 : -1.0;
            lu += 0.5 * lam * std::log(x[j - 1] - x[i - 1]);
        }
    return std::exp(lu);
}

Eigen::MatrixXd incidence_inverse(int n) {
    Eigen::MatrixXd k = incidence_matrix(n);
    Eigen::MatrixXd inv = k.fullPivLu().inverse();
    return inv.array().round().matrix();
}

double pure_Z_kappa4(const LinkPattern& alpha, const std::vector<double>& x) {
    int n = alpha.n();
    if (n > 5) throw std::invalid_argument("pure_Z_kappa4: N <= 5");
    check_config(x, n);
    auto pats = enumerate_patterns(n);
    Eigen::MatrixXd kinv = incidence_inverse(n);
    int i = pattern_index(pats, alpha);
    double z = 0;
    for (int j = 0; j < static_cast<int>(pats.size()); ++j)
        if (kinv(i, j) != 0.0) z += kinv(i, j) * conformal_block_U(pats[j], x);
    return z;
}

std::vector<PartitionValue> pure_Z_all(double kappa, int n, const std::vector<double>& x) {
    if (!(kappa > 0 && kappa < 8)) throw std::invalid_argument("pure_Z: kappa outside (0,8)");
    check_config(x, n);
    auto pats = enumerate_patterns(n);
    std::vector<PartitionValue> out(pats.size());
    for (auto& v : out) v.kappa = kappa;
    if (n == 1) {
        out[0].value = std::pow(x[1] - x[0], -2.0 * hh(kappa));
        out[0].method = "closed-form";
        return out;
    }
    if (std::abs(kappa - 4.0) < 1e-12) {
        for (std::size_t i = 0; i < pats.size(); ++i) {
            out[i].value = pure_Z_kappa4(pats[i], x);
            out[i].method = "closed-form";
        }
        return out;
    }
    if (n == 2) {
        for (std::size_t i = 0; i < pats.size(); ++i) {
            out[i].value = pure_Z_N2(kappa, pats[i].has_link(1, 4), x);
            out[i].method = "closed-form";
        }
        return out;
    }
    if (n != 3) throw std::invalid_argument("pure_Z: unsupported N at this kappa");
    if (!kappa_invertibility(n, kappa)) throw std::domain_error("pure_Z: meander matrix singular at this kappa");
    double nu = -2.0 * std::cos(4.0 * kPi / kappa);
    Eigen::MatrixXd m = meander_matrix(n, nu);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double cond = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    if (!(cond <= 1e8)) throw std::domain_error("pure_Z: meander matrix condition number above 1e8");
    auto f = coulomb_F_all(kappa, n, x);
    Eigen::VectorXd fv(f.size()), fe(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        fv(i) = f[i].value;
        fe(i) = f[i].abs_error;
    }
    Eigen::MatrixXd minv = m.inverse();
    Eigen::VectorXd z = minv * fv;
    Eigen::VectorXd ze = minv.cwiseAbs() * fe;
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i].value = z(i);
        out[i].abs_error = ze(i) + 1e-15 * cond * std::abs(z(i));
        out[i].method = "meander-solve";
    }
    return out;
}

PartitionValue pure_Z(double kappa, const LinkPattern& alpha, const std::vector<double>& x) {
    int n = alpha.n();
    check_config(x, n);
    if (n == 2 && !(std::abs(kappa - 4.0) < 1e-12)) {
        PartitionValue v;
        v.kappa = kappa;
        v.value = pure_Z_N2(kappa, alpha.has_link(1, 4), x);
        v.method = "closed-form";
        return v;
    }
    auto all = pure_Z_all(kappa, n, x);
    return all[pattern_index(enumerate_patterns(n), alpha)];
}

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

RenormValue fhat_odd(double kappa, const LinkPattern& beta, const std::vector<double>& x, bool limit_route) {
    int m = exceptional_index(kappa, 1e-12);
    if (m < 3 || m % 2 == 0) throw std::invalid_argument("fhat_odd: kappa must equal 8/(2m+1), m >= 1");
    int n = beta.n();
    if (n > 3) throw std::invalid_argument("fhat_odd: N <= 3");
    check_config(x, n);
    RenormValue out;
    if (n <= 2) {
        auto pats = enumerate_patterns(n);
        Eigen::MatrixXd mh = meander_matrix(n, 0.0, true);
        auto z = pure_Z_all(kappa, n, x);
        int j = pattern_index(pats, beta);
        double v = 0;
        for (int i = 0; i < static_cast<int>(pats.size()); ++i) v += mh(i, j) * z[i].value;
        out.meander.kappa = kappa;
        out.meander.value = v;
        out.meander.method = "closed-form";
        out.value = out.meander;
        if (!limit_route) return out;
    } else if (!limit_route) {
        throw std::invalid_argument("fhat_odd: N = 3 needs the limit route");
    }
    auto slope = [&](double d) {
        double fp = f_direct(kappa + d, beta, x, FRoute::Auto, 1e-12).value;
        double fm = f_direct(kappa - d, beta, x, FRoute::Auto, 1e-12).value;
        return (fp - fm) / (2.0 * d);
    };
    double d4 = slope(0.04), d2 = slope(0.02), d1 = slope(0.01);
    double s = (4.0 * d1 - d2) / 3.0;
    // stability: compare with the estimate one step coarser
    double s_coarse = (4.0 * d2 - d4) / 3.0;
    if (rel(s, s_coarse) > 1e-3) throw std::runtime_error("fhat_odd: slope extrapolation unstable");
    double pre = -kappa * kappa / (8.0 * kPi * std::sin(4.0 * kPi / kappa));
    out.limit.kappa = kappa;
    out.limit.value = pre * s;
    out.limit.abs_error = std::abs(pre) * std::abs(s - s_coarse);
    out.limit.method = "extrapolated";
    if (n <= 2) out.rel_diff = rel(out.meander.value, out.limit.value);
    else out.value = out.limit;
    return out;
}

RenormValue fhat_eight(const LinkPattern& beta, const std::vector<double>& x, bool limit_route) {
    int n = beta.n();
    if (n > 3) throw std::invalid_argument("fhat_eight: N <= 3");
    check_config(x, n);
    RenormValue out;
    auto h = coulomb_H(8.0, beta, x, HRoute::Auto, 1e-11);
    double pre = 8.0 / (std::pow(32.0, n) * kPi);
    out.value.kappa = 8.0;
    out.value.value = pre * h.value.real();
    out.value.abs_error = pre * h.abs_error;
    out.value.method = "contour";
    if (!limit_route) return out;
    // (8/pi) F(k)/(8-k)^N, extrapolated linearly to k = 8 from 7.9 and 7.95
    auto ratio = [&](double k) { return f_direct(k, beta, x, FRoute::Auto, 1e-12).value / std::pow(8.0 - k, n); };
    double r1 = ratio(7.9), r2 = ratio(7.95);
    out.limit.kappa = 8.0;
    out.limit.value = (8.0 / kPi) * (2.0 * r2 - r1);
    out.limit.abs_error = (8.0 / kPi) * std::abs(r2 - r1);
    out.limit.method = "extrapolated";
    out.rel_diff = rel(out.value.value, out.limit.value);
    return out;
}

PartitionValue zhat_eight(const LinkPattern& alpha, const std::vector<double>& x) {
    int n = alpha.n();
    check_config(x, n);
    auto pats = enumerate_patterns(n);
    Eigen::MatrixXd mh = meander_matrix(n, 0.0, true);
    Eigen::MatrixXd inv = mh.fullPivLu().inverse();
    int i = pattern_index(pats, alpha);
    PartitionValue out;
    out.kappa = 8.0;
    out.method = "contour";
    for (int j = 0; j < static_cast<int>(pats.size()); ++j) {
        if (std::abs(inv(i, j)) < 1e-12) continue;
        auto f = fhat_eight(pats[j], x, false).value;
        out.value += inv(i, j) * f.value;
        out.abs_error += std::abs(inv(i, j)) * f.abs_error;
    }
    return out;
}

double z_three(double kappa, double xi, double x3, double x4) {
    if (!(xi < x3 && x3 < x4)) throw std::invalid_argument("z_three: requires xi < x3 < x4");
    return std::pow(x4 - x3, 2.0 / kappa) * std::pow((x3 - xi) * (x4 - xi), 1.0 - 8.0 / kappa) / f21_one(kappa);
}

double fused_F(double kappa, const LinkPattern& beta, double xi, const std::vector<double>& x_rest) {
    if (!(kappa > 8.0 / 3.0 && kappa < 8.0) || std::abs(kappa - 4.0) < 1e-12)
        throw std::invalid_argument("fused_F: kappa must lie in (8/3,8) minus {4}");
    int n = beta.n();
    if (n < 2 || n > 3) throw std::invalid_argument("fused_F: N must be 2 or 3");
    if (beta.has_link(1, 2)) throw std::invalid_argument("fused_F: {1,2} must not be a link");
    if (static_cast<int>(x_rest.size()) != 2 * n - 2) throw std::invalid_argument("fused_F: wrong point count");
    if (!(xi < x_rest[0])) throw std::invalid_argument("fused_F: requires xi < x_3");
    for (std::size_t i = 1; i < x_rest.size(); ++i)
        if (!(x_rest[i] > x_rest[i - 1])) throw std::invalid_argument("unsorted boundary points");
    double nu = -2.0 * std::cos(4.0 * kPi / kappa);
    double coef = (nu * nu - 1.0) / f21_one(kappa);
    if (n == 2) return coef * std::pow(x_rest[1] - x_rest[0], 2.0 / kappa) *
                       std::pow((x_rest[0] - xi) * (x_rest[1] - xi), 1.0 - 8.0 / kappa);
    // one screening on the link avoiding 1 and 2; points (xi, x_3, ..., x_2N)
    std::vector<double> pts{xi};
    pts.insert(pts.end(), x_rest.begin(), x_rest.end());
    std::pair<int, int> link{0, 0};
    for (auto [a, b] : beta.links())
        if (a >= 3) link = {a - 1, b - 1};
    BranchedIntegrand f;
    f.kappa = kappa;
    f.marked.assign(pts.begin(), pts.end());
    f.screenings = 1;
    std::vector<double> row(pts.size(), -4.0 / kappa);
    row[0] = 16.0 / kappa - 2.0;
    f.expo = {row};
    f.mutual = 8.0 / kappa;
    double lp = 0;
    for (std::size_t j = 1; j < pts.size(); ++j) {
        lp += (1.0 - 8.0 / kappa) * std::log(pts[j] - xi);
        for (std::size_t i = 1; i < j; ++i) lp += (2.0 / kappa) * std::log(pts[j] - pts[i]);
    }
    f.prefactor = std::exp(lp);
    auto paths = pattern_contours({link}, pts);
    auto v = integrate_path(f, paths, 1e-11);
    double c = nu / nu_over_c(kappa);
    return c * coef * v.value.real();
}

double fused_F_kappa4(const LinkPattern& beta, double xi, const std::vector<double>& x_rest) {
    int n = beta.n();
    if (beta.has_link(1, 2)) throw std::invalid_argument("fused_F_kappa4: {1,2} must not be a link");
    if (static_cast<int>(x_rest.size()) != 2 * n - 2) throw std::invalid_argument("fused_F_kappa4: wrong point count");
    if (!(xi < x_rest[0])) throw std::invalid_argument("fused_F_kappa4: requires xi < x_3");
    auto pats = enumerate_patterns(n);
    Eigen::MatrixXd kinv = incidence_inverse(n);
    Eigen::MatrixXd m2 = meander_matrix(n, 2.0);
    int nb = pattern_index(pats, beta);
    int np = static_cast<int>(pats.size());
    // Z_{alpha/v1} and Z_{alpha/x1} share one formula
    std::vector<double> zf(np, 0.0);
    for (int g = 0; g < np; ++g) {
        const auto& gam = pats[g];
        std::vector<int> is_a(2 * n + 1, 0);
        for (auto [a, b] : gam.links()) is_a[a] = 1;
        auto lam = [&](int i, int j) { return is_a[i] == is_a[j] ? 1.0 : -1.0; };
        double term;
        if (gam.has_link(1, 2)) {
            double u = n == 1 ? 1.0 : conformal_block_U(remove_link(gam, 1), x_rest);
            double s = 0;
            for (int i = 3; i <= 2 * n; ++i) s += 0.5 * lam(i, 1) / (x_rest[i - 3] - xi);
            term = u * s;
        } else {
            double lu = 0;
            for (int i = 3; i <= 2 * n; ++i) {
                lu += lam(i, 1) * std::log(x_rest[i - 3] - xi);
                for (int j = i + 1; j <= 2 * n; ++j) lu += 0.5 * lam(i, j) * std::log(x_rest[j - 3] - x_rest[i - 3]);
            }
            term = std::exp(lu);
        }
        for (int a = 0; a < np; ++a) zf[a] += kinv(a, g) * term;
    }
    double v = 0;
    for (int a = 0; a < np; ++a) v += m2(a, nb) * zf[a];
    return v;
}

double sign_ratio_G(double kappa, double z) {
    double a = 4.0 / kappa, b = 12.0 / kappa - 1.0, c = 8.0 / kappa;
    return hyp2f1(a, b, c, z) / hyp2f1(a, b, c, 1.0 - z);
}

double sign_structure_N2(double kappa) {
    double nu = -2.0 * std::cos(4.0 * kPi / kappa);
    if (!(nu < 0)) throw std::domain_error("sign_structure_N2: requires nu(kappa) < 0");
    double target = -nu;  // 2 cos(4 pi / kappa)
    double lo = 1e-9, hi = 1.0 - 1e-9;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        double mid = 0.5 * (lo + hi);
        if (sign_ratio_G(kappa, mid) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace msle
