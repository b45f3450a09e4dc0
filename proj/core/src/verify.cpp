#include "msle/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "msle/contour.hpp"
#include "msle/partition.hpp"
#include "msle/specfun.hpp"

namespace msle {

namespace {

constexpr double kPi = std::numbers::pi;

double hh(double kappa) { return (6.0 - kappa) / (2.0 * kappa); }
double nu_of(double kappa) { return -2.0 * std::cos(4.0 * kPi / kappa); }

bool odd_exceptional(double kappa) {
    int m = exceptional_index(kappa, 1e-12);
    return m >= 3 && m % 2 == 1;
}

// derivative of order k at 0; O(h^4) for k <= 2, O(h^2) for k = 3
double fd(const std::function<double(double)>& g, int k, double h) {
    double p1 = g(h), m1 = g(-h), p2 = g(2 * h), m2 = g(-2 * h);
    switch (k) {
        case 1: return (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h);
        case 2: return (-p2 + 16 * p1 - 30 * g(0.0) + 16 * m1 - m2) / (12 * h * h);
        case 3: return (p2 - 2 * p1 + 2 * m1 - m2) / (2 * h * h * h);
        default: throw std::invalid_argument("fd: order 1..3");
    }
}

double fd_rich(const std::function<double(double)>& g, int k, double h, double* coarse = nullptr) {
    double a = fd(g, k, h), b = fd(g, k, 0.5 * h);
    if (coarse) *coarse = a;
    double f = (k == 3) ? 3.0 : 15.0;
    return b + (b - a) / f;
}

std::vector<double> shifted(std::vector<double> x, int i, double d) {
    x[i] += d;
    return x;
}

Residual normalize(const std::vector<double>& terms, const std::vector<double>& coarse_terms) {
    Residual r;
    for (double t : terms) r.max_term = std::max(r.max_term, std::abs(t));
    double cmax = 0;
    for (double t : coarse_terms) cmax = std::max(cmax, std::abs(t));
    double s = std::accumulate(terms.begin(), terms.end(), 0.0);
    double sc = std::accumulate(coarse_terms.begin(), coarse_terms.end(), 0.0);
    r.residual = r.max_term > 0 ? std::abs(s) / r.max_term : 0.0;
    r.coarse = cmax > 0 ? std::abs(sc) / cmax : 0.0;
    return r;
}

double rel_dev(double a, double b) {
    double s = std::max(std::abs(a), std::abs(b));
    return s > 0 ? std::abs(a - b) / s : 0.0;
}

// F or, at kappa = 8/(2m+1), the renormalized F-hat
double f_or_fhat(double kappa, const LinkPattern& beta, const std::vector<double>& x) {
    if (odd_exceptional(kappa)) return fhat_odd(kappa, beta, x, beta.n() > 2).value.value;
    if (beta.n() == 1 && !(kappa > 0 && kappa < 8)) throw std::invalid_argument("kappa outside (0,8)");
    return coulomb_F(kappa, beta, x).value;
}

}  // namespace

CheckReport make_report(std::string name, std::string inputs, double measured, double reference, double tol,
                        bool relative) {
    CheckReport r{std::move(name), std::move(inputs), measured, reference, tol, relative, false};
    double scale = relative ? std::abs(reference) : 1.0;
    r.pass = std::isfinite(measured) && std::abs(measured - reference) <= tol * scale;
    return r;
}

double min_gap(const std::vector<double>& x) {
    double g = INFINITY;
    for (std::size_t i = 1; i < x.size(); ++i) g = std::min(g, x[i] - x[i - 1]);
    return g;
}

std::vector<double> random_config(int n_points, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> x(n_points, 0.0);
    for (int i = 1; i < n_points; ++i) x[i] = x[i - 1] + u(rng);
    return x;
}

std::string fmt_points(const std::vector<double>& x) {
    std::ostringstream os;
    os.precision(6);
    os << "x=(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << ")";
    return os.str();
}

Residual bpz_residual(const Evaluator& F, double kappa, const std::vector<double>& x, int j, double step) {
    int n2 = static_cast<int>(x.size());
    if (j < 1 || j > n2) throw std::invalid_argument("bpz_residual: index out of range");
    double gap = min_gap(x);
    double h = step > 0 ? step : 1e-3 * gap;
    if (h > 0.1 * gap) throw std::invalid_argument("bpz_residual: step too large for the configuration");
    int jj = j - 1;
    double hk = hh(kappa);
    double f0 = F(x);
    std::vector<double> terms, coarse;
    double c2 = 0;
    double d2 = fd_rich([&](double d) { return d == 0.0 ? f0 : F(shifted(x, jj, d)); }, 2, h, &c2);
    terms.push_back(0.5 * kappa * d2);
    coarse.push_back(0.5 * kappa * c2);
    for (int i = 0; i < n2; ++i) {
        if (i == jj) continue;
        double dx = x[i] - x[jj];
        double c1 = 0;
        double d1 = fd_rich([&](double d) { return F(shifted(x, i, d)); }, 1, h, &c1);
        terms.push_back(2.0 / dx * d1);
        coarse.push_back(2.0 / dx * c1);
        terms.push_back(-2.0 * hk / (dx * dx) * f0);
        coarse.push_back(-2.0 * hk / (dx * dx) * f0);
    }
    return normalize(terms, coarse);
}

CheckReport mobius_check(const PatternEvaluator& F, double kappa, const LinkPattern& beta, const Mobius& phi,
                         const std::vector<double>& x, double tol) {
    if (!(phi.a * phi.d - phi.b * phi.c > 0)) throw std::invalid_argument("mobius_check: map must preserve orientation");
    int n2 = static_cast<int>(x.size());
    std::vector<double> y(n2);
    for (int i = 0; i < n2; ++i) {
        if (std::abs(phi.c * x[i] + phi.d) < 1e-9) throw std::invalid_argument("mobius_check: point mapped to infinity");
        y[i] = phi(x[i]);
    }
    std::vector<int> order(n2);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int p, int q) { return y[p] < y[q]; });
    std::vector<int> label(n2);
    std::vector<double> ys(n2);
    for (int k = 0; k < n2; ++k) {
        label[order[k]] = k + 1;
        ys[k] = y[order[k]];
    }
    std::vector<std::pair<int, int>> links;
    for (auto [a, b] : beta.links()) links.emplace_back(label[a - 1], label[b - 1]);
    LinkPattern pb(links);
    double lhs = F(beta, x);
    double w = 0;
    for (int i = 0; i < n2; ++i) w += hh(kappa) * std::log(phi.deriv(x[i]));
    double rhs = std::exp(w) * F(pb, ys);
    std::ostringstream in;
    in << "kappa=" << kappa << " beta=" << beta.str() << " phi(beta)=" << pb.str() << " " << fmt_points(x);
    auto r = make_report("mobius", in.str(), rel_dev(lhs, rhs), 0.0, tol, false);
    return r;
}

std::vector<double> geometric_separations(double lo, double hi, int count) {
    std::vector<double> s(count);
    for (int i = 0; i < count; ++i) s[i] = hi * std::pow(lo / hi, count > 1 ? double(i) / (count - 1) : 0.0);
    return s;
}

FrobFit frobenius_fit(const std::vector<double>& s, const std::vector<double>& values, const std::vector<FrobTerm>& terms) {
    int m = static_cast<int>(s.size()), k = static_cast<int>(terms.size());
    if (m < k || m < 4) throw std::invalid_argument("frobenius_fit: too few samples");
    Eigen::MatrixXd a(m, k);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
        double w = std::abs(values[i]) > 0 ? 1.0 / std::abs(values[i]) : 1.0;
        for (int t = 0; t < k; ++t)
            a(i, t) = w * std::pow(s[i], terms[t].exponent) * std::pow(std::abs(std::log(s[i])), terms[t].log_power);
        b(i) = w * values[i];
    }
    Eigen::VectorXd cn = a.colwise().norm();
    for (int t = 0; t < k; ++t) a.col(t) /= cn(t);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    FrobFit fit;
    fit.condition = sv(0) / sv(k - 1);
    if (!(fit.condition < 1e12)) throw std::runtime_error("frobenius_fit: ill-conditioned design matrix");
    Eigen::VectorXd c = svd.solve(b);
    fit.residual = std::sqrt((a * c - b).squaredNorm() / m);
    fit.coef.resize(k);
    for (int t = 0; t < k; ++t) fit.coef[t] = c(t) / cn(t);
    return fit;
}

AsyResult asy_check(double kappa, const LinkPattern& beta, int j, double xi, const std::vector<double>& x_other,
                    const std::vector<double>& separations, double tol) {
    int n = beta.n();
    if (j < 1 || j >= 2 * n) throw std::invalid_argument("asy_check: j must lie in 1..2N-1");
    if (static_cast<int>(x_other.size()) != 2 * n - 2) throw std::invalid_argument("asy_check: wrong point count");
    for (std::size_t i = 1; i < separations.size(); ++i)
        if (!(separations[i] < separations[i - 1])) throw std::invalid_argument("asy_check: separations must decrease");
    double smax = separations.front();
    if (j >= 2 && !(x_other[j - 2] < xi - smax)) throw std::invalid_argument("asy_check: xi too close to x_{j-1}");
    if (j + 1 <= 2 * n - 1 && !(xi + smax < x_other[j - 1])) throw std::invalid_argument("asy_check: xi too close to x_{j+2}");

    bool renorm = odd_exceptional(kappa);
    bool linked = beta.has_link(j, j + 1);
    double h2 = 2.0 * hh(kappa);
    AsyResult out;
    out.separations = separations;
    for (double s : separations) {
        std::vector<double> x = x_other;
        x.insert(x.begin() + (j - 1), {xi - 0.5 * s, xi + 0.5 * s});
        out.ratios.push_back(f_or_fhat(kappa, beta, x) * std::pow(s, h2));
    }
    // reference and the scale for an absolute comparison when it vanishes
    LinkPattern reduced_src = linked ? beta : tie_links(beta, j);
    double sub = 1.0;
    if (n > 1) sub = f_or_fhat(kappa, remove_link(reduced_src, j), x_other);
    double ref = linked ? (renorm ? (n > 1 ? 0.0 : 1.0) : nu_of(kappa) * sub) : sub;
    double scale = std::abs(sub);

    double p = (8.0 - kappa) / kappa;
    std::vector<FrobTerm> terms{{0.0, 0}};
    if (linked) {
        terms.push_back({1.0, 0});
        terms.push_back({2.0, 0});
        out.expected_slope = 1.0;
    } else {
        terms.push_back({p, renorm ? 1 : 0});
        if (renorm) terms.push_back({p, 0});
        if (std::abs(p - 1.0) > 0.05) terms.push_back({1.0, 0});
        out.expected_slope = std::min(p, 1.0);
    }
    double limit = out.ratios.back();
    if (out.ratios.size() >= std::max<std::size_t>(4, terms.size() + 1)) {
        // unweighted: the ratios are O(1)
        Eigen::MatrixXd a(out.ratios.size(), terms.size());
        Eigen::VectorXd b(out.ratios.size());
        for (std::size_t i = 0; i < out.ratios.size(); ++i) {
            for (std::size_t t = 0; t < terms.size(); ++t)
                a(i, t) = std::pow(separations[i], terms[t].exponent) *
                          std::pow(std::abs(std::log(separations[i])), terms[t].log_power);
            b(i) = out.ratios[i];
        }
        limit = a.colPivHouseholderQr().solve(b)(0);
    }
    out.raw_rel_error = scale > 0 ? std::abs(out.ratios.back() - ref) / scale : 0.0;
    {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < separations.size(); ++i) {
            double e = std::abs(out.ratios[i] - ref);
            if (e > 1e-13 * scale) {
                lx.push_back(std::log(separations[i]));
                ly.push_back(std::log(e));
            }
        }
        if (lx.size() >= 2) {
            double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
            double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
            double sxy = 0, sxx = 0;
            for (std::size_t i = 0; i < lx.size(); ++i) {
                sxy += (lx[i] - mx) * (ly[i] - my);
                sxx += (lx[i] - mx) * (lx[i] - mx);
            }
            out.slope = sxy / sxx;
        }
    }
    std::ostringstream in;
    in << "kappa=" << kappa << " beta=" << beta.str() << " j=" << j << " xi=" << xi << " s_min=" << separations.back();
    if (ref == 0.0) out.report = make_report("asy", in.str(), limit, 0.0, tol * scale, false);
    else out.report = make_report("asy", in.str(), limit, ref, tol, true);
    return out;
}

Residual third_pde_residual(double kappa, double xi, const std::vector<double>& x_rest, double step) {
    if (x_rest.size() != 2) throw std::invalid_argument("third_pde_residual: N = 2 only");
    bool k4 = std::abs(kappa - 4.0) < 1e-12;
    LinkPattern beta = rainbow_pattern(2);
    auto F = [&](double z, double x3, double x4) {
        return k4 ? fused_F_kappa4(beta, z, {x3, x4}) : fused_F(kappa, beta, z, {x3, x4});
    };
    double gap = std::min(x_rest[0] - xi, x_rest[1] - x_rest[0]);
    double h = step > 0 ? step : 1e-3 * gap;
    double hk = hh(kappa);
    double x3 = x_rest[0], x4 = x_rest[1];
    double f0 = F(xi, x3, x4);
    std::vector<double> t, c;
    double cc = 0;
    double d3 = fd_rich([&](double d) { return F(xi + d, x3, x4); }, 3, h, &cc);
    t.push_back(d3);
    c.push_back(cc);
    double dxi = fd_rich([&](double d) { return F(xi + d, x3, x4); }, 1, h, &cc);
    double dxi_c = cc;
    double c3 = 8.0 * (8.0 - kappa) / (kappa * kappa);
    for (int i = 0; i < 2; ++i) {
        double xi_i = x_rest[i];
        double r = xi_i - xi;
        auto Fi = [&](double d, double e) {
            return i == 0 ? F(xi + e, x3 + d, x4) : F(xi + e, x3, x4 + d);
        };
        double dxc = 0;
        double dx = fd_rich([&](double d) { return Fi(d, 0.0); }, 1, h, &dxc);
        double dmc = 0;
        double dmix = fd_rich(
            [&](double d) { return fd_rich([&](double e) { return Fi(d, e); }, 1, h); }, 1, h, &dmc);
        t.push_back(-(16.0 / kappa) * hk / (r * r) * dxi);
        c.push_back(-(16.0 / kappa) * hk / (r * r) * dxi_c);
        t.push_back((16.0 / kappa) / r * dmix);
        c.push_back((16.0 / kappa) / r * dmc);
        t.push_back(c3 * 2.0 * hk / (r * r * r) * f0);
        c.push_back(c3 * 2.0 * hk / (r * r * r) * f0);
        t.push_back(-c3 / (r * r) * dx);
        c.push_back(-c3 / (r * r) * dxc);
    }
    return normalize(t, c);
}

BraidCheck braid_phase(double kappa, const LinkPattern& beta, const std::vector<double>& x) {
    auto b = braid_transport(kappa, beta, x);
    return {b.ratio, b.expected, std::abs(b.ratio - b.expected)};
}

double refined_bound_ratio(double kappa, const LinkPattern& alpha, const std::vector<double>& x) {
    double z = pure_Z(kappa, alpha, x).value;
    double lb = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            double d = x[j] - x[i];
            lb += (d >= 1.0 ? 10.0 / kappa : -6.0 / kappa) * std::log(d);
        }
    return z / std::exp(lb);
}

double strong_bound_ratio(double kappa, const LinkPattern& alpha, const std::vector<double>& x) {
    double z = pure_Z(kappa, alpha, x).value;
    double lb = 0;
    for (auto [a, b] : alpha.links()) lb += hh(kappa) * std::log(half_plane_poisson(x[a - 1], x[b - 1]));
    return z / std::exp(lb);
}

}  // namespace msle
