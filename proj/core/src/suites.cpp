#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "msle/contour.hpp"
#include "msle/partition.hpp"
#include "msle/specfun.hpp"
#include "msle/verify.hpp"

namespace msle {

namespace {

constexpr double kPi = std::numbers::pi;

using Reports = std::vector<CheckReport>;

double hh(double kappa) { return (6.0 - kappa) / (2.0 * kappa); }
double nu_of(double kappa) { return -2.0 * std::cos(4.0 * kPi / kappa); }

std::string kstr(double kappa) {
    std::ostringstream os;
    os.precision(6);
    os << "kappa=" << kappa;
    return os.str();
}

// x with cross-ratio chi: (0, 2chi/(1+chi), 1, 2)
std::vector<double> config_with_chi(double chi) { return {0.0, 2.0 * chi / (1.0 + chi), 1.0, 2.0}; }

void combinatorics(Reports& out, std::mt19937_64& rng) {
    auto beta = parallel_pattern(3);
    const char* alphas[] = {"1-2.3-4.5-6", "1-6.2-3.4-5", "1-2.3-6.4-5", "1-6.2-5.3-4", "1-4.2-3.5-6"};
    const int expect[] = {3, 1, 2, 2, 2};
    for (int i = 0; i < 5; ++i)
        out.push_back(make_report("meander_loops", std::string("alpha=") + alphas[i] + " beta=1-2.3-4.5-6",
                                  meander_loops(LinkPattern::parse(alphas[i]), beta), expect[i], 0.0, false));
    for (int n = 1; n <= 6; ++n)
        out.push_back(make_report("catalan", "N=" + std::to_string(n),
                                  static_cast<double>(enumerate_patterns(n).size()), static_cast<double>(catalan(n)),
                                  0.0, false));
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 10; ++i) {
        double nu = u(rng);
        double ref = std::pow(nu, 5) * (nu * nu - 2) * std::pow(nu * nu - 1, 4);
        std::ostringstream in;
        in.precision(17);
        in << "N=3 nu=" << nu;
        out.push_back(make_report("meander_det", in.str(), meander_matrix(3, nu).determinant(), ref, 1e-12, true));
        out.push_back(make_report("meander_det_reference", in.str(), meander_det_reference(3, nu), ref, 1e-12, true));
    }
}

void identities(Reports& out) {
    for (double k : {3.3, 5.0, 7.2}) {
        BranchedIntegrand f;
        f.kappa = k;
        f.marked = {0.0, 1.0};
        f.screenings = 1;
        f.expo = {{-4.0 / k, -4.0 / k}};
        auto p = make_pochhammer(0.0, 1.0, 0.24);
        auto v0 = integrate_path(f, {p}, 1e-13);
        out.push_back(make_report("beta_loop", kstr(k), v0.value.real(), nu_over_c(k), 1e-8, true));
        // (2u - 1) = 2u - 1 with u real positive at the path start
        f.expo = {{1.0 - 4.0 / k, -4.0 / k}};
        auto v1 = integrate_path(f, {p}, 1e-13);
        out.push_back(make_report("beta_loop_odd", kstr(k), std::abs(2.0 * v1.value - v0.value), 0.0, 1e-10, false));
    }
    out.push_back(make_report("vanish_kappa4", "N=1 x=(0,1)",
                              std::abs(coulomb_H(4.0, parallel_pattern(1), {0, 1}, HRoute::Full).value), 0.0, 1e-9,
                              false));
    {
        BranchedIntegrand f;
        f.kappa = 4.0;
        f.marked = {0.0, 1.0};
        f.screenings = 1;
        f.expo = {{-1.0, -1.0}};
        auto v = integrate_path(f, {make_pochhammer(0.0, 1.0, 0.24)}, 1e-12);
        out.push_back(make_report("vanish_kappa4", "u^-1 (u-1)^-1", std::abs(v.value), 0.0, 1e-9, false));
    }
    for (double k : {3.3, 5.0, 7.2})
        for (const auto& x : {std::vector<double>{0, 1}, std::vector<double>{-0.7, 2.3}}) {
            double ref = nu_over_c(k) * std::pow(x[1] - x[0], -2.0 * hh(k));
            double h = coulomb_H(k, parallel_pattern(1), x, HRoute::Full, 1e-12).value.real();
            out.push_back(make_report("n1_closed_form", kstr(k) + " " + fmt_points(x), h, ref, 1e-8, true));
        }
}

void meander_relation(Reports& out, std::mt19937_64& rng) {
    std::vector<std::vector<double>> xs;
    for (int c = 0; c < 5; ++c) xs.push_back(random_config(4, rng));
    for (double k : {10.0 / 3.0, 5.0, 7.0}) {
        double nu = nu_of(k);
        auto mm = meander_matrix(2, nu);
        for (const auto& x : xs) {
            auto f = coulomb_F_all(k, 2, x);
            auto z = pure_Z_all(k, 2, x);
            for (int b = 0; b < 2; ++b) {
                double mz = mm(0, b) * z[0].value + mm(1, b) * z[1].value;
                out.push_back(make_report("meander_relation",
                                          kstr(k) + " beta=" + enumerate_patterns(2)[b].str() + " " + fmt_points(x) +
                                              " F:" + f[b].method,
                                          mz, f[b].value, 1e-6, true));
            }
        }
    }
    auto x = xs.front();
    for (const auto& b : enumerate_patterns(2))
        out.push_back(make_report("line_vs_contour", "kappa=5 beta=" + b.str() + " " + fmt_points(x),
                                  coulomb_F(5.0, b, x, FRoute::Line).value, coulomb_F(5.0, b, x, FRoute::Contour).value,
                                  1e-8, true));
}

void special(Reports& out, std::mt19937_64& rng) {
    std::vector<std::vector<double>> xs{{0, 1, 2, 4}};
    for (int c = 0; c < 2; ++c) xs.push_back(random_config(4, rng));
    for (const auto& x : xs)
        for (const auto& b : enumerate_patterns(2)) {
            std::string in = " beta=" + b.str() + " " + fmt_points(x);
            out.push_back(make_report("kappa6_unit", "line" + in, coulomb_F(6.0, b, x).value, 1.0, 1e-6, false));
            out.push_back(make_report("kappa6_unit", "contour" + in, coulomb_F(6.0, b, x, FRoute::Contour).value, 1.0,
                                      1e-6, false));
            out.push_back(make_report("kappa3_pfaffian", in, coulomb_F(3.0, b, x).value, closed_F_special(3.0, b, x),
                                      1e-6, true));
            out.push_back(make_report("kappa16_3_spin", in, coulomb_F(16.0 / 3.0, b, x).value,
                                      closed_F_special(16.0 / 3.0, b, x), 1e-5, true));
        }
    double k = 16.0 / 3.0;
    out.push_back(make_report("kappa16_3_n1", "x=(0,1.7)", closed_F_special(k, parallel_pattern(1), {0, 1.7}),
                              nu_of(k) * std::pow(1.7, -2.0 * hh(k)), 1e-12, true));
}

void sign(Reports& out) {
    out.push_back(make_report("z_root", "kappa=12/5", sign_structure_N2(12.0 / 5.0), 0.5, 1e-6, false));
    for (double k : {2.2, 5.0}) out.push_back(make_report("G_half", kstr(k), sign_ratio_G(k, 0.5), 1.0, 1e-12, false));
    double k = 2.2;
    double z = sign_structure_N2(k);
    auto p = parallel_pattern(2);
    for (double d : {-0.05, 0.05}) {
        double chi = z + d;
        auto x = config_with_chi(chi);
        double f = coulomb_F(k, p, x).value;
        std::ostringstream in;
        in << "kappa=2.2 z=" << z << " chi=" << chi << " F=" << f;
        out.push_back(make_report(d < 0 ? "sign_below_z" : "sign_above_z", in.str(), (f > 0) == (d < 0) ? 1.0 : 0.0,
                                  1.0, 0.0, false));
    }
    for (const auto& x : {std::vector<double>{0, 1, 2, 4}, std::vector<double>{0, 0.3, 2, 2.2}})
        for (const auto& b : enumerate_patterns(2)) {
            double f = coulomb_F(3.5, b, x).value;
            out.push_back(make_report("positive_kappa3_5", "beta=" + b.str() + " " + fmt_points(x), f > 0 ? 1.0 : 0.0,
                                      1.0, 0.0, false));
        }
    for (const auto& b : enumerate_patterns(2))
        out.push_back(make_report("null_kappa8_3", "beta=" + b.str() + " x=(0,1,2,4)",
                                  std::abs(coulomb_F(8.0 / 3.0, b, {0, 1, 2, 4}).value), 0.0, 1e-4, false));
    int turns = 0;
    double prev = 0, prev_dir = 0;
    for (int i = 0; i <= 20; ++i) {
        double kk = 1.65 + i * (2.6 - 1.65) / 20;
        double zz = sign_structure_N2(kk);
        if (i > 0) {
            double dir = zz > prev ? 1.0 : -1.0;
            if (i > 1 && dir != prev_dir) ++turns;
            prev_dir = dir;
        }
        prev = zz;
    }
    out.push_back(make_report("z_oscillates", "kappa grid [1.65,2.6], 21 points", turns >= 1 ? 1.0 : 0.0, 1.0, 0.0,
                              false));
}

void pde(Reports& out, std::mt19937_64& rng) {
    for (double k : {10.0 / 3.0, 5.0, 7.0})
        for (int n : {1, 2})
            for (int c = 0; c < 5; ++c) {
                auto x = random_config(2 * n, rng);
                PatternEvaluator F = [k](const LinkPattern& b, const std::vector<double>& y) {
                    return coulomb_F(k, b, y, FRoute::Auto, 1e-12).value;
                };
                for (const auto& b : enumerate_patterns(n)) {
                    std::string in = kstr(k) + " beta=" + b.str() + " " + fmt_points(x);
                    double worst = 0;
                    for (int j = 1; j <= 2 * n; ++j) {
                        auto r = bpz_residual([&](const std::vector<double>& y) { return F(b, y); }, k, x, j);
                        worst = std::max(worst, r.residual);
                    }
                    out.push_back(make_report("bpz", in, worst, 0.0, 1e-4, false));
                    double cc = 0.5 / (x.back() + 1.0);
                    out.push_back(mobius_check(F, k, b, Mobius{1, 0, -cc, 1}, x, 1e-5));
                    double p = 0.5 * (x[2 * n - 2] + x[2 * n - 1]);
                    auto rot = mobius_check(F, k, b, Mobius{0, 1, -1, p}, x, 1e-5);
                    rot.name = "mobius_rotation";
                    out.push_back(rot);
                }
            }
    for (double k : {4.0, 5.0})
        for (const auto& xr : {std::vector<double>{0, 1, 2}, std::vector<double>{-0.5, 0.7, 3.0}}) {
            auto r = third_pde_residual(k, xr[0], {xr[1], xr[2]});
            out.push_back(make_report("third_order_pde", kstr(k) + " (xi,x3,x4)=" + fmt_points(xr), r.residual, 0.0,
                                      1e-4, false));
        }
}

void asy(Reports& out) {
    auto seps = geometric_separations(1e-3, 1e-1, 7);
    for (const auto& b : enumerate_patterns(2)) {
        for (int j = 1; j <= 3; ++j) {
            std::vector<double> other;
            double xi = 0;
            // pair placed between neighbours
            if (j == 1) { other = {1.0, 2.5}; xi = 0.0; }
            if (j == 2) { other = {-1.0, 2.5}; xi = 0.7; }
            if (j == 3) { other = {-1.0, 0.4}; xi = 1.6; }
            auto a = asy_check(5.0, b, j, xi, other, seps, 0.01);
            out.push_back(a.report);
            std::ostringstream in;
            in << a.report.inputs << " expected_slope=" << a.expected_slope;
            out.push_back(make_report("asy_rate", in.str(), a.slope >= 0.9 * a.expected_slope ? 1.0 : 0.0, 1.0, 0.0,
                                      false));
        }
    }
    auto a = asy_check(8.0 / 3.0, parallel_pattern(2), 1, 0.0, {1.0, 2.5}, seps, 0.01);
    a.report.name = "asy_renormalized";
    out.push_back(a.report);
}

void frobenius(Reports& out) {
    auto s = geometric_separations(1e-3, 1e-1, 10);
    std::vector<double> rest{1.0, 2.5};
    auto at = [&](double e) { return std::vector<double>{-0.5 * e, 0.5 * e, rest[0], rest[1]}; };
    {
        double k = 5.0, h = hh(k), nu = nu_of(k);
        std::vector<double> v;
        for (double e : s) v.push_back(coulomb_F(k, rainbow_pattern(2), at(e)).value);
        auto fit = frobenius_fit(s, v, {{-2 * h, 0}, {2 / k, 0}, {1 - 2 * h, 0}, {2 - 2 * h, 0}});
        out.push_back(make_report("frobenius_fused", "kappa=5 beta=1-4.2-3 xi=0 x3=1 x4=2.5", fit.coef[1],
                                  (nu * nu - 1) * z_three(k, 0, rest[0], rest[1]), 0.02, true));
        out.push_back(make_report("frobenius_leading", "kappa=5 beta=1-4.2-3", fit.coef[0],
                                  coulomb_F(k, parallel_pattern(1), rest).value, 0.02, true));
    }
    {
        double k = 8.0 / 3.0;
        std::vector<double> vp, vt;
        for (double e : s) {
            vp.push_back(fhat_odd(k, parallel_pattern(2), at(e), false).value.value);
            vt.push_back(fhat_odd(k, rainbow_pattern(2), at(e), false).value.value);
        }
        double z3 = z_three(k, 0, rest[0], rest[1]);
        auto fp = frobenius_fit(s, vp, {{-1.25, 0}, {0.75, 0}, {1.75, 0}});
        out.push_back(make_report("frobenius_8_3_paired_c0", "beta=1-2.3-4 relative to c1", std::abs(fp.coef[0] / fp.coef[1]),
                                  0.0, 1e-3, false));
        out.push_back(make_report("frobenius_8_3_paired_c1", "beta=1-2.3-4", fp.coef[1], z3, 0.05, true));
        auto ft = frobenius_fit(s, vt, {{-1.25, 0}, {0.75, 1}, {0.75, 0}, {-0.25, 0}});
        out.push_back(make_report("frobenius_8_3_tying_c0", "beta=1-4.2-3", ft.coef[0],
                                  fhat_odd(k, parallel_pattern(1), rest, false).value.value, 0.05, true));
        out.push_back(make_report("frobenius_8_3_tying_log", "beta=1-4.2-3", ft.coef[1], -z3 / kPi, 0.05, true));
    }
    {
        auto s8 = geometric_separations(1e-3, 1e-1, 8);
        std::vector<double> v;
        for (double e : s8) v.push_back(fhat_eight(rainbow_pattern(2), at(e), false).value.value);
        auto fit = frobenius_fit(s8, v, {{0.25, 1}, {0.25, 0}, {1.25, 1}, {1.25, 0}});
        out.push_back(make_report("frobenius_8_log", "beta=1-4.2-3", fit.coef[0],
                                  fhat_eight(parallel_pattern(1), rest, false).value.value / 8.0, 0.05, true));
    }
}

void renorm(Reports& out, std::mt19937_64& rng) {
    for (const auto& x : {std::vector<double>{0, 1, 2, 3}, std::vector<double>{0, 0.6, 2, 2.8}})
        for (const auto& b : enumerate_patterns(2)) {
            auto v = fhat_odd(8.0 / 3.0, b, x);
            std::string in = "kappa=8/3 beta=" + b.str() + " " + fmt_points(x);
            out.push_back(make_report("fhat_odd_routes", in, v.limit.value, v.meander.value, 1e-3, true));
            out.push_back(make_report("fhat_odd_positive", in, v.value.value > 0 ? 1.0 : 0.0, 1.0, 0.0, false));
        }
    {
        auto v = fhat_odd(8.0 / 3.0, parallel_pattern(1), {0, 1.7});
        out.push_back(make_report("fhat_odd_n1", "x=(0,1.7)", v.value.value, std::pow(1.7, -1.25), 1e-12, true));
        out.push_back(make_report("fhat_odd_routes", "kappa=8/3 N=1 x=(0,1.7)", v.limit.value, v.meander.value, 1e-3, true));
    }
    for (int n : {1, 2})
        for (const auto& b : enumerate_patterns(n)) {
            auto x = n == 1 ? std::vector<double>{0, 1.5} : std::vector<double>{0, 1, 2, 4};
            auto v = fhat_eight(b, x);
            std::string in = "beta=" + b.str() + " " + fmt_points(x);
            out.push_back(make_report("fhat_eight_routes", in, v.limit.value, v.value.value, 1e-3, true));
            if (n == 1) out.push_back(make_report("fhat_eight_n1", in, v.value.value, std::pow(1.5, 0.25), 1e-9, true));
        }
    for (int c = 0; c < 20; ++c) {
        auto x = random_config(4, rng);
        for (const auto& b : enumerate_patterns(2)) {
            double f = fhat_eight(b, x, false).value.value;
            out.push_back(make_report("fhat_eight_positive", "beta=" + b.str() + " " + fmt_points(x), f > 0 ? 1.0 : 0.0,
                                      1.0, 0.0, false));
        }
    }
    {
        std::vector<double> x{0, 1, 2, 4};
        // linear extrapolation of Z / (8 - kappa') from kappa' in {7.9, 7.95}
        auto z1 = pure_Z_all(7.9, 2, x);
        auto z2 = pure_Z_all(7.95, 2, x);
        auto pats = enumerate_patterns(2);
        for (int i = 0; i < 2; ++i) {
            auto zh = zhat_eight(pats[i], x);
            std::string in = "alpha=" + pats[i].str() + " " + fmt_points(x);
            out.push_back(make_report("zhat_eight_positive", in, zh.value > 0 ? 1.0 : 0.0, 1.0, 0.0, false));
            double lim = 2.0 * z2[i].value / 0.05 - z1[i].value / 0.1;
            out.push_back(make_report("zhat_eight_limit", in + " kappa'=7.9,7.95", lim, zh.value, 2e-3, true));
        }
    }
}

void braid(Reports& out) {
    for (double k : {4.0, 10.0 / 3.0, 5.0, 7.0}) {
        auto b = braid_phase(k, parallel_pattern(1), {0, 1});
        out.push_back(make_report("braid_n1", kstr(k), b.deviation, 0.0, 1e-12, false));
    }
    for (double k : {10.0 / 3.0, 5.0})
        for (const auto& beta : enumerate_patterns(2)) {
            auto b = braid_phase(k, beta, {0, 1, 2, 4});
            out.push_back(make_report("braid_n2", kstr(k) + " beta=" + beta.str() + " x=(0,1,2,4)", b.deviation, 0.0,
                                      1e-5, false));
        }
}

void bounds(Reports& out, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> lg(-2.0, 2.0);
    auto draw = [&] {
        std::vector<double> x{0.0};
        for (int i = 0; i < 3; ++i) x.push_back(x.back() + std::pow(10.0, lg(rng)));
        return x;
    };
    auto pats = enumerate_patterns(2);
    // refined bound: constant fitted on one sample, validated on a second
    double cfit = 0;
    for (int c = 0; c < 100; ++c) {
        auto x = draw();
        for (const auto& a : pats) cfit = std::max(cfit, refined_bound_ratio(5.0, a, x));
    }
    double worst = 0;
    for (int c = 0; c < 100; ++c) {
        auto x = draw();
        for (const auto& a : pats) worst = std::max(worst, refined_bound_ratio(5.0, a, x));
    }
    std::ostringstream in;
    in << "kappa=5 N=2 100+100 configs, fitted C=" << cfit;
    out.push_back(make_report("refined_bound", in.str(), worst / cfit <= 10.0 && cfit > 0 ? 1.0 : 0.0, 1.0, 0.0, false));
    double sworst = 0;
    for (int c = 0; c < 100; ++c) {
        auto x = draw();
        for (const auto& a : pats) sworst = std::max(sworst, strong_bound_ratio(3.5, a, x));
    }
    out.push_back(make_report("strong_bound", "kappa=3.5 N=2 100 configs, max Z/prod H^h", sworst, 1.0,
                              1e-12, true));
    out.back().pass = sworst <= 1.0 + 1e-12;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"combinatorics", "identities", "meander", "special", "sign", "pde",
            "asy",           "frobenius",  "renorm",  "braid",   "bounds"};
}

std::vector<CheckReport> run_suite(const std::string& name, std::uint64_t seed) {
    Reports out;
    if (name == "all") {
        for (const auto& s : suite_names()) {
            auto r = run_suite(s, seed);
            out.insert(out.end(), r.begin(), r.end());
        }
        return out;
    }
    auto names = suite_names();
    auto idx = static_cast<std::uint64_t>(std::find(names.begin(), names.end(), name) - names.begin());
    std::seed_seq ss{seed, idx};
    std::mt19937_64 rng(ss);
    if (name == "combinatorics") combinatorics(out, rng);
    else if (name == "identities") identities(out);
    else if (name == "meander") meander_relation(out, rng);
    else if (name == "special") special(out, rng);
    else if (name == "sign") sign(out);
    else if (name == "pde") pde(out, rng);
    else if (name == "asy") asy(out);
    else if (name == "frobenius") frobenius(out);
    else if (name == "renorm") renorm(out, rng);
    else if (name == "braid") braid(out);
    else if (name == "bounds") bounds(out, rng);
    else throw std::invalid_argument("unknown suite: " + name);
    return out;
}

}  // namespace msle
