#include "msle/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "msle/quadrature.hpp"
#include "msle/specfun.hpp"

namespace msle {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

// arg change of (z - q) along piece p from s = 0 to s
double piece_arg(const Piece& p, cplx q, double s) {
    cplx z0 = p.at(0.0);
    if (!p.arc) return std::arg((p.at(s) - q) / (z0 - q));
    cplx zm = p.at(0.5 * s);
    return std::arg((zm - q) / (z0 - q)) + std::arg((p.at(s) - q) / (zm - q));
}

std::vector<double> cumulative_args(const Path& path, cplx q) {
    std::vector<double> cum(path.size() + 1, 0.0);
    for (int k = 0; k < path.size(); ++k) cum[k + 1] = cum[k] + piece_arg(path.pieces[k], q, 1.0);
    return cum;
}

void locate(const Path& path, double T, int& k, double& t) {
    k = std::clamp(static_cast<int>(std::floor(T)), 0, path.size() - 1);
    t = T - k;
}

double seg_distance(cplx a, cplx b, cplx p) {
    cplx d = b - a;
    double n2 = std::norm(d);
    double s = n2 > 0 ? std::clamp(std::real((p - a) * std::conj(d)) / n2, 0.0, 1.0) : 0.0;
    return std::abs(a + s * d - p);
}

double min_gap(const std::vector<double>& x) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < x.size(); ++i) g = std::min(g, x[i] - x[i - 1]);
    return g;
}

void check_chamber(const std::vector<double>& x) {
    if (x.size() % 2 != 0 || x.empty()) throw std::invalid_argument("odd number of boundary points");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw std::invalid_argument("boundary points not strictly increasing");
}

}  // namespace

cplx Piece::at(double s) const {
    if (!arc) return z0 + s * (z1 - z0);
    return center + std::polar(radius, t0 + s * (t1 - t0));
}

cplx Piece::deriv(double s) const {
    if (!arc) return z1 - z0;
    double th = t0 + s * (t1 - t0);
    return kI * (t1 - t0) * std::polar(radius, th);
}

void Path::segment(cplx a, cplx b) {
    Piece p;
    p.z0 = a;
    p.z1 = b;
    pieces.push_back(p);
}

void Path::arc(cplx center, double radius, double start_angle, double sweep) {
    int n = std::max(1, static_cast<int>(std::ceil(std::abs(sweep) / (0.5 * kPi) - 1e-12)));
    for (int j = 0; j < n; ++j) {
        Piece p;
        p.arc = true;
        p.center = center;
        p.radius = radius;
        p.t0 = start_angle + sweep * j / n;
        p.t1 = start_angle + sweep * (j + 1) / n;
        pieces.push_back(p);
    }
}

void Path::append(const Path& other) { pieces.insert(pieces.end(), other.pieces.begin(), other.pieces.end()); }

Path Path::reversed() const {
    Path r;
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
        Piece p = *it;
        if (p.arc) std::swap(p.t0, p.t1);
        else std::swap(p.z0, p.z1);
        r.pieces.push_back(p);
    }
    return r;
}

cplx Path::at(double T) const {
    int k;
    double t;
    locate(*this, T, k, t);
    return pieces[k].at(t);
}

double Path::clearance(const std::vector<cplx>& pts) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces)
        for (cplx q : pts) {
            if (!p.arc) {
                d = std::min(d, seg_distance(p.z0, p.z1, q));
            } else {
                for (int j = 0; j <= 32; ++j) d = std::min(d, std::abs(p.at(j / 32.0) - q));
            }
        }
    return d;
}

Path Path::prefix(double T) const {
    int k;
    double t;
    locate(*this, T, k, t);
    Path r;
    r.pieces.assign(pieces.begin(), pieces.begin() + k);
    if (t > 0) {
        Piece p = pieces[k];
        if (p.arc) p.t1 = p.t0 + t * (p.t1 - p.t0);
        else p.z1 = p.z0 + t * (p.z1 - p.z0);
        r.pieces.push_back(p);
    }
    return r;
}

Path make_circle(cplx center, double radius, double start_angle, bool ccw) {
    Path p;
    p.arc(center, radius, start_angle, ccw ? 2 * kPi : -2 * kPi);
    return p;
}

Path make_pochhammer(cplx a, cplx b, double clearance, double height) {
    double len = std::abs(b - a);
    if (!(len > 0)) throw std::invalid_argument("make_pochhammer: degenerate endpoints");
    if (!(clearance > 0 && clearance < 0.25 * len))
        throw std::invalid_argument("make_pochhammer: clearance must lie in (0, |b-a|/4)");
    cplx d = (b - a) / len;
    cplx nrm = kI * d;
    cplx p0 = a + clearance * d;
    cplx p1 = b - clearance * d;
    Path strand;
    if (height > 0) {
        strand.segment(p0, p0 + height * nrm);
        strand.segment(p0 + height * nrm, p1 + height * nrm);
        strand.segment(p1 + height * nrm, p1);
    } else {
        strand.segment(p0, p1);
    }
    Path back = strand.reversed();
    double ang_a = std::arg(d);
    double ang_b = std::arg(-d);
    Path path;
    path.append(strand);
    path.arc(b, clearance, ang_b, -2 * kPi);
    path.append(back);
    path.arc(a, clearance, ang_a, 2 * kPi);
    path.append(strand);
    path.arc(b, clearance, ang_b, 2 * kPi);
    path.append(back);
    path.arc(a, clearance, ang_a, -2 * kPi);
    return path;
}

double arg_change(const Path& p, cplx q) { return cumulative_args(p, q).back(); }

double winding_number(const Path& p, cplx z) { return arg_change(p, z) / (2 * kPi); }

BranchedIntegrand coulomb_integrand(double kappa, const LinkPattern& beta, const std::vector<double>& x) {
    check_chamber(x);
    int n2 = static_cast<int>(x.size());
    if (n2 != 2 * beta.n()) throw std::invalid_argument("coulomb_integrand: point count does not match pattern");
    BranchedIntegrand f;
    f.kappa = kappa;
    f.marked.assign(x.begin(), x.end());
    f.screenings = beta.n();
    f.expo.assign(beta.n(), std::vector<double>(n2, -4.0 / kappa));
    f.mutual = 8.0 / kappa;
    double lp = 0;
    for (int i = 0; i < n2; ++i)
        for (int j = i + 1; j < n2; ++j) lp += (2.0 / kappa) * std::log(x[j] - x[i]);
    f.prefactor = std::exp(lp);
    return f;
}

BranchedIntegrand reduced_integrand(double kappa, const LinkPattern& beta, const std::vector<double>& x, int r,
                                    bool at_b) {
    check_chamber(x);
    int n2 = static_cast<int>(x.size());
    if (n2 != 2 * beta.n()) throw std::invalid_argument("reduced_integrand: point count does not match pattern");
    if (r < 0 || r >= beta.n()) throw std::invalid_argument("reduced_integrand: link index out of range");
    double h = (6.0 - kappa) / (2.0 * kappa);
    int c = (at_b ? beta.links()[r].second : beta.links()[r].first) - 1;
    BranchedIntegrand f;
    f.kappa = kappa;
    f.marked.assign(x.begin(), x.end());
    f.screenings = beta.n() - 1;
    std::vector<double> row(n2, -4.0 / kappa);
    row[c] = 4.0 * h;
    f.expo.assign(f.screenings, row);
    f.mutual = 8.0 / kappa;
    double lp = 0;
    for (int i = 0; i < n2; ++i) {
        if (i == c) continue;
        lp += -2.0 * h * std::log(std::abs(x[i] - x[c]));
        for (int j = i + 1; j < n2; ++j)
            if (j != c) lp += (2.0 / kappa) * std::log(x[j] - x[i]);
    }
    f.prefactor = std::exp(lp);
    return f;
}

namespace {

double theta(const BranchedIntegrand& f, int s, int i) {
    if (f.theta0.empty()) return 0.0;
    return f.theta0[s][i];
}

struct Nest {
    const BranchedIntegrand& f;
    const std::vector<Path>& paths;
    int S = 0;
    int M = 0;
    double rel = 0, abs = 0;
    long max_top = 0, max_inner = 0;
    long evals = 0;
    bool converged = true;
    std::vector<std::vector<std::vector<double>>> cumx;       // [s][i][k]
    std::vector<std::vector<std::vector<double>>> cumstart;   // [r][s][k], r < s
    std::vector<std::vector<std::vector<double>>> mutab;      // [s][r][k]
    std::vector<std::vector<double>> start_arg;               // [s][r]
    std::vector<cplx> u;
    std::vector<int> pk;
    std::vector<double> pt;

    Nest(const BranchedIntegrand& f_, const std::vector<Path>& p_) : f(f_), paths(p_) {
        S = f.screenings;
        M = static_cast<int>(f.marked.size());
        cumx.resize(S);
        cumstart.resize(S);
        for (int s = 0; s < S; ++s) {
            for (int i = 0; i < M; ++i) cumx[s].push_back(cumulative_args(paths[s], f.marked[i]));
            cumstart[s].resize(S);
            for (int t = s + 1; t < S; ++t) cumstart[s][t] = cumulative_args(paths[s], paths[t].start());
        }
        mutab.assign(S, std::vector<std::vector<double>>(S));
        start_arg.assign(S, std::vector<double>(S, 0.0));
        u.assign(S, 0.0);
        pk.assign(S, 0);
        pt.assign(S, 0.0);
    }

    cplx level(int s, double logacc, double phacc) {
        const Path& path = paths[s];
        cplx ps = path.start();
        for (int r = 0; r < s; ++r) {
            mutab[s][r] = cumulative_args(path, u[r]);
            start_arg[s][r] = cumstart[r][s][pk[r]] + piece_arg(paths[r].pieces[pk[r]], ps, pt[r]);
        }
        auto integrand = [&, s](double T) -> cplx {
            int k;
            double t;
            locate(path, T, k, t);
            const Piece& pc = path.pieces[k];
            cplx z = pc.at(t);
            double lm = logacc, ph = phacc;
            for (int i = 0; i < M; ++i) {
                double e = f.expo[s][i];
                if (e == 0.0) continue;
                lm += e * std::log(std::abs(z - f.marked[i]));
                ph += e * (theta(f, s, i) + cumx[s][i][k] + piece_arg(pc, f.marked[i], t));
            }
            for (int r = 0; r < s; ++r) {
                lm += f.mutual * std::log(std::abs(z - u[r]));
                ph += f.mutual * (start_arg[s][r] + mutab[s][r][k] + piece_arg(pc, u[r], t));
            }
            cplx dz = pc.deriv(t);
            if (s == S - 1) return std::exp(lm) * std::polar(1.0, ph) * dz;
            u[s] = z;
            pk[s] = k;
            pt[s] = t;
            return level(s + 1, lm, ph) * dz;
        };
        std::vector<std::pair<double, double>> iv;
        for (int k = 0; k < path.size(); ++k) iv.emplace_back(k, k + 1);
        double r_tol = s == 0 ? rel : 0.3 * rel;
        double a_tol = s == 0 ? abs : 0.0;
        auto res = quad::adaptive<cplx>(integrand, iv, a_tol, r_tol, s == 0 ? max_top : max_inner, 1e-3 * r_tol);
        evals += res.evals;
        if (!res.converged) converged = false;
        if (s == 0) top_error = res.abs_error;
        return res.value;
    }

    double top_error = 0;
};

}  // namespace

cplx eval_branched(const BranchedIntegrand& f, const std::vector<Path>& prefixes) {
    int S = f.screenings;
    if (static_cast<int>(prefixes.size()) != S) throw std::invalid_argument("eval_branched: one prefix per screening");
    std::vector<cplx> pts = f.marked;
    double scale = 0;
    for (cplx z : pts) scale = std::max(scale, std::abs(z));
    double tol = 1e-12 * std::max(1.0, scale);
    for (int s = 0; s < S; ++s)
        if (!prefixes[s].pieces.empty() && prefixes[s].clearance(pts) < tol)
            throw std::domain_error("eval_branched: path passes through a branch point");
    auto start = [&](int s) { return prefixes[s].pieces.empty() ? cplx(0) : prefixes[s].start(); };
    auto end = [&](int s) { return prefixes[s].pieces.empty() ? cplx(0) : prefixes[s].end(); };
    double lm = std::log(std::abs(f.prefactor));
    double ph = std::arg(f.prefactor);
    for (int s = 0; s < S; ++s) {
        cplx z = end(s);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double e = f.expo[s][i];
            if (e == 0.0) continue;
            double a = prefixes[s].pieces.empty() ? 0.0 : arg_change(prefixes[s], pts[i]);
            lm += e * std::log(std::abs(z - pts[i]));
            ph += e * (theta(f, s, static_cast<int>(i)) + a);
        }
        for (int r = 0; r < s; ++r) {
            double a1 = prefixes[r].pieces.empty() ? 0.0 : arg_change(prefixes[r], start(s));
            double a2 = prefixes[s].pieces.empty() ? 0.0 : arg_change(prefixes[s], end(r));
            lm += f.mutual * std::log(std::abs(z - end(r)));
            ph += f.mutual * (a1 + a2);
        }
    }
    return std::exp(lm) * std::polar(1.0, ph);
}

ContourValue integrate_path(const BranchedIntegrand& f, const std::vector<Path>& paths, double rel_tol, double abs_tol,
                            long max_evals) {
    if (static_cast<int>(paths.size()) != f.screenings)
        throw std::invalid_argument("integrate_path: one path per screening");
    ContourValue out;
    out.method = "contour";
    if (f.screenings == 0) {
        out.value = f.prefactor;
        return out;
    }
    double scale = 1.0;
    for (cplx z : f.marked) scale = std::max(scale, std::abs(z));
    for (const auto& p : paths)
        if (p.clearance(f.marked) < 1e-9 * scale)
            throw std::domain_error("integrate_path: path too close to a branch point");
    Nest nest(f, paths);
    nest.rel = rel_tol;
    nest.abs = abs_tol / std::max(std::abs(f.prefactor), 1e-300);
    nest.max_top = max_evals;
    nest.max_inner = std::max(2000L, max_evals / 10);
    cplx v = nest.level(0, 0.0, 0.0);
    out.value = f.prefactor * v;
    out.abs_error = std::abs(f.prefactor) * nest.top_error;
    out.evals = nest.evals;
    out.converged = nest.converged;
    return out;
}

double contour_clearance(const std::vector<double>& x) { return 0.24 * min_gap(x); }

std::vector<Path> pattern_contours(const std::vector<std::pair<int, int>>& links, const std::vector<double>& x) {
    double g = min_gap(x);
    double r = contour_clearance(x);
    int n = static_cast<int>(links.size());
    std::vector<int> lev(n, -1);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int p, int q) {
        return links[p].second - links[p].first < links[q].second - links[q].first;
    });
    for (int p : order) {
        int best = 0;
        for (int q = 0; q < n; ++q)
            if (q != p && links[q].first > links[p].first && links[q].second < links[p].second)
                best = std::max(best, lev[q] + 1);
        lev[p] = best;
    }
    std::vector<Path> out;
    for (int p = 0; p < n; ++p) {
        auto [a, b] = links[p];
        double height = (b == a + 1) ? 0.0 : (lev[p] + 1) * 0.5 * g;
        out.push_back(make_pochhammer(x[a - 1], x[b - 1], r, height));
    }
    return out;
}

int removal_choice(const LinkPattern& beta) {
    int best = 0;
    std::pair<int, int> best_score{1 << 20, 1 << 20};
    for (int r = 0; r < beta.n(); ++r) {
        int depth = 0, wide = 0;
        for (int s = 0; s < beta.n(); ++s) {
            if (s == r) continue;
            auto [a, b] = beta.links()[s];
            if (b != a + 1) ++wide;
            int d = 0;
            for (int t = 0; t < beta.n(); ++t) {
                if (t == r || t == s) continue;
                auto [c, e] = beta.links()[t];
                if (c > a && e < b) ++d;
            }
            depth = std::max(depth, d);
        }
        std::pair<int, int> score{depth, wide};
        if (score < best_score) {
            best_score = score;
            best = r;
        }
    }
    return best;
}

namespace {

ContourValue reduced_integral(double kappa, const LinkPattern& beta, const std::vector<double>& x, int r, bool at_b,
                              double rel_tol) {
    auto f = reduced_integrand(kappa, beta, x, r, at_b);
    std::vector<std::pair<int, int>> links;
    for (int s = 0; s < beta.n(); ++s)
        if (s != r) links.push_back(beta.links()[s]);
    return integrate_path(f, pattern_contours(links, x), rel_tol);
}

}  // namespace

ContourValue coulomb_H_reduced(double kappa, const LinkPattern& beta, const std::vector<double>& x, int r, bool at_b,
                               double rel_tol) {
    auto v = reduced_integral(kappa, beta, x, r, at_b, rel_tol);
    double k = nu_over_c(kappa);
    v.value *= k;
    v.abs_error *= std::abs(k);
    v.method = "contour-reduced";
    return v;
}

ContourValue coulomb_H(double kappa, const LinkPattern& beta, const std::vector<double>& x, HRoute route,
                       double rel_tol) {
    if (!(kappa > 0)) throw std::invalid_argument("coulomb_H: kappa must be positive");
    check_chamber(x);
    if (static_cast<int>(x.size()) != 2 * beta.n())
        throw std::invalid_argument("coulomb_H: point count does not match pattern");
    if (route == HRoute::Auto) route = beta.n() == 1 ? HRoute::Full : HRoute::Reduced;
    if (route == HRoute::Full) {
        if (beta.n() > 3) throw std::invalid_argument("coulomb_H: nested contour route limited to N <= 3");
        auto f = coulomb_integrand(kappa, beta, x);
        auto v = integrate_path(f, pattern_contours(beta.links(), x), rel_tol);
        v.method = "contour-full";
        return v;
    }
    if (beta.n() > 4) throw std::invalid_argument("coulomb_H: reduced contour route limited to N <= 4");
    return coulomb_H_reduced(kappa, beta, x, removal_choice(beta), true, rel_tol);
}

// ---------------------------------------------------------------- line route

namespace {

enum class Dom { Finite, LeftInf, RightInf };

struct LineVar {
    Dom dom;
    int a, b;  // 0-based endpoints; for half-lines a == b is the finite end
};

struct LineNest {
    const std::vector<double>& x;
    const std::vector<std::vector<double>>& expo;
    double mutual;
    const std::vector<LineVar>& vars;
    double rel;
    double span;
    std::vector<double> u;
    long evals = 0;
    bool converged = true;
    double top_error = 0;

    double log_weight(int s, double v) {
        double lm = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double e = expo[s][i];
            if (e != 0.0) lm += e * std::log(std::abs(v - x[i]));
        }
        for (int t = 0; t < s; ++t) lm += mutual * std::log(std::abs(v - u[t]));
        return lm;
    }

    double inner(int s, double v) {
        u[s] = v;
        return s + 1 < static_cast<int>(vars.size()) ? level(s + 1) : 1.0;
    }

    double clear_left(int i) { return i > 0 ? x[i] - x[i - 1] : span; }
    double clear_right(int i) { return i + 1 < static_cast<int>(x.size()) ? x[i + 1] - x[i] : span; }

    double level(int s) {
        const LineVar& lv = vars[s];
        double tol = s == 0 ? rel : 0.3 * rel;
        quad::Result<double> res;
        if (lv.dom == Dom::Finite) {
            double a = x[lv.a], b = x[lv.b];
            double ea = expo[s][lv.a], eb = expo[s][lv.b];
            auto g = [&, s](double v) {
                double lm = log_weight(s, v) - ea * std::log(v - a) - eb * std::log(b - v);
                return std::exp(lm) * inner(s, v);
            };
            res = quad::jacobi_weighted(g, a, b, ea, eb, clear_left(lv.a), clear_right(lv.b), tol);
        } else {
            // v = p +/- L (1 - w)/w, w in (0,1]
            int p = lv.a;
            double L = span;
            double sign = lv.dom == Dom::RightInf ? 1.0 : -1.0;
            double ep = expo[s][p];
            double etot = 0;
            for (double e : expo[s]) etot += e;
            etot += mutual * s;
            double alpha = -etot - 2.0;
            double cr = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (static_cast<int>(i) == p) continue;
                double d = sign * (x[p] - x[i]);  // distance to the other side
                if (d > 0 && d < L) cr = std::min(cr, d / (L - d));
            }
            if (!std::isfinite(cr)) cr = 1.0;
            auto g = [&, s](double w) {
                double v = x[p] + sign * L * (1.0 - w) / w;
                double lm = log_weight(s, v) + std::log(L) - 2.0 * std::log(w) - alpha * std::log(w) -
                            ep * std::log(1.0 - w);
                return std::exp(lm) * inner(s, v);
            };
            res = quad::jacobi_weighted(g, 0.0, 1.0, alpha, ep, 1.0, cr, tol);
        }
        evals += res.evals;
        if (!res.converged) converged = false;
        if (s == 0) top_error = res.abs_error;
        return res.value;
    }
};

LinkPattern link62_pattern(int n) {
    std::vector<std::pair<int, int>> l{{1, 2 * n}};
    for (int s = 1; s < n; ++s) l.emplace_back(2 * s, 2 * s + 1);
    return LinkPattern(l);
}

int collapsible_link(const LinkPattern& beta) {
    for (int r = 0; r < beta.n(); ++r) {
        bool ok = true;
        for (int s = 0; s < beta.n(); ++s)
            if (s != r && beta.links()[s].second != beta.links()[s].first + 1) ok = false;
        if (ok) return r;
    }
    return -1;
}

}  // namespace

bool line_form_available(const LinkPattern& beta, LineForm form) {
    switch (form) {
        case LineForm::Collapsed: return collapsible_link(beta) >= 0;
        case LineForm::Parallel: return beta == parallel_pattern(beta.n());
        case LineForm::Link62: return beta == link62_pattern(beta.n());
        case LineForm::Auto:
            return collapsible_link(beta) >= 0 || beta == parallel_pattern(beta.n()) ||
                   beta == link62_pattern(beta.n());
    }
    return false;
}

LineValue coulomb_H_line(double kappa, const LinkPattern& beta, const std::vector<double>& x, LineForm form,
                         double rel_tol) {
    if (!(kappa > 4 && kappa < 8)) throw std::invalid_argument("coulomb_H_line: kappa outside (4,8)");
    check_chamber(x);
    int n = beta.n();
    int n2 = 2 * n;
    if (static_cast<int>(x.size()) != n2) throw std::invalid_argument("coulomb_H_line: point count does not match pattern");
    if (form == LineForm::Auto) {
        if (collapsible_link(beta) >= 0) form = LineForm::Collapsed;
        else if (beta == parallel_pattern(n)) form = LineForm::Parallel;
        else if (beta == link62_pattern(n)) form = LineForm::Link62;
        else throw std::invalid_argument("coulomb_H_line: no line reduction for pattern " + beta.str());
    }
    if (!line_form_available(beta, form)) throw std::invalid_argument("coulomb_H_line: form not available for " + beta.str());

    auto kp = kappa_params(kappa);
    double nu = kp.nu;
    double chat = nu * gamma_fn(2.0 - 8.0 / kappa) / std::pow(gamma_fn(1.0 - 4.0 / kappa), 2);
    std::vector<std::vector<double>> expo;
    std::vector<LineVar> vars;
    double lp = 0;
    double coef = 0;
    LineValue out;
    if (form == LineForm::Collapsed) {
        int r = collapsible_link(beta);
        auto f = reduced_integrand(kappa, beta, x, r, true);
        expo = f.expo;
        lp = std::log(std::abs(f.prefactor));
        for (int s = 0; s < n; ++s)
            if (s != r) vars.push_back({Dom::Finite, beta.links()[s].first - 1, beta.links()[s].second - 1});
        coef = nu * std::pow(chat, n - 1);
        out.method = "line-collapsed";
    } else {
        auto f = coulomb_integrand(kappa, beta, x);
        expo = f.expo;
        lp = std::log(std::abs(f.prefactor));
        if (form == LineForm::Parallel) {
            vars.push_back({Dom::LeftInf, 0, 0});
            for (int s = 1; s < n; ++s) vars.push_back({Dom::Finite, 2 * s, 2 * s + 1});
            out.method = "line-parallel";
        } else {
            for (int s = 1; s < n; ++s) vars.push_back({Dom::Finite, 2 * s - 1, 2 * s});
            vars.push_back({Dom::RightInf, n2 - 1, n2 - 1});
            out.method = "line-link62";
        }
        coef = nu * std::pow(chat, n);
    }
    if (vars.empty()) {
        out.value = coef * std::exp(lp);
        return out;
    }
    LineNest nest{x, expo, 8.0 / kappa, vars, rel_tol, x.back() - x.front(), std::vector<double>(vars.size(), 0.0)};
    double v = nest.level(0);
    double scale = coef * std::exp(lp);
    out.value = scale * v;
    out.abs_error = std::abs(scale) * nest.top_error;
    out.evals = nest.evals;
    out.converged = nest.converged;
    return out;
}

// ---------------------------------------------------------------- braid transport

BraidResult braid_transport(double kappa, const LinkPattern& beta, const std::vector<double>& x, int steps,
                            double rel_tol) {
    check_chamber(x);
    int n = beta.n();
    int n2 = 2 * n;
    if (static_cast<int>(x.size()) != n2) throw std::invalid_argument("braid_transport: point count does not match pattern");
    if (n > 2) throw std::invalid_argument("braid_transport: N <= 2 only");
    // the reduced integrand is single-valued at kappa = 8/m and both loop integrals vanish
    if (n == 2 && exceptional_index(kappa, 1e-9)) throw std::domain_error("braid_transport: kappa = 8/m at N = 2");
    double h = (6.0 - kappa) / (2.0 * kappa);
    int r = beta.link_of(n2);
    double cen = 0.5 * (x.front() + x.back());
    double rad = 0.5 * (x.back() - x.front());

    auto points = [&](double tau) {
        std::vector<cplx> p(n2);
        for (int j = 0; j + 1 < n2; ++j) p[j] = x[j] + tau * (x[j + 1] - x[j]);
        p[n2 - 1] = cen + std::polar(rad, kPi * tau);
        return p;
    };
    // anchors u_s = x_{a_s} + clearance, with clearance following the moving real points
    auto anchors = [&](double tau, const std::vector<cplx>& p) {
        std::vector<double> xr(n2 - 1);
        for (int j = 0; j + 1 < n2; ++j) xr[j] = p[j].real();
        double g = std::numeric_limits<double>::infinity();
        for (int j = 1; j + 1 < n2; ++j) g = std::min(g, xr[j] - xr[j - 1]);
        if (n2 == 2) g = 1.0;
        (void)tau;
        std::vector<cplx> u;
        for (int s = 0; s < n; ++s)
            if (s != r) u.push_back(p[beta.links()[s].first - 1] + 0.24 * g);
        return u;
    };

    // factor list: (index into combined point vector, index, exponent); combined = marked then anchors
    struct Factor {
        int p, q;
        double e;
    };
    std::vector<Factor> fac;
    int c = n2 - 1;
    for (int i = 0; i < n2; ++i)
        for (int j = i + 1; j < n2; ++j) {
            if (i == c || j == c) fac.push_back({j, i, -2.0 * h});
            else fac.push_back({j, i, 2.0 / kappa});
        }
    int S = n - 1;
    for (int s = 0; s < S; ++s) {
        for (int i = 0; i < n2; ++i) fac.push_back({n2 + s, i, i == c ? 4.0 * h : -4.0 / kappa});
        for (int t = 0; t < s; ++t) fac.push_back({n2 + s, n2 + t, 8.0 / kappa});
    }
    auto combined = [&](double tau) {
        auto p = points(tau);
        auto u = anchors(tau, p);
        p.insert(p.end(), u.begin(), u.end());
        return p;
    };
    std::vector<double> acc(fac.size(), 0.0);
    auto prev = combined(0.0);
    for (int k = 1; k <= steps; ++k) {
        auto cur = combined(static_cast<double>(k) / steps);
        for (std::size_t m = 0; m < fac.size(); ++m) {
            cplx d0 = prev[fac[m].p] - prev[fac[m].q];
            cplx d1 = cur[fac[m].p] - cur[fac[m].q];
            acc[m] += std::arg(d1 / d0);
        }
        prev = cur;
    }
    // the start and end values are both taken as |.|, so only the accumulated args remain
    double phase = 0;
    for (std::size_t m = 0; m < fac.size(); ++m) phase += fac[m].e * acc[m];
    BraidResult out;
    out.phase = std::polar(1.0, phase);
    out.expected = -std::polar(1.0, -6.0 * kPi / kappa);

    // the moved points occupy the original positions with labels shifted by one
    const std::vector<double>& y = x;
    out.end_points = y;
    LinkPattern sb = rotate_pattern(beta);
    // continued integral: reduced a-form at the link of new index 1
    int r1 = sb.link_of(1);
    // nu/C is common to both sides and vanishes at kappa = 8/m, so compare the bare integrals
    ContourValue cont = reduced_integral(kappa, sb, y, r1, false, rel_tol);
    ContourValue ref = reduced_integral(kappa, sb, y, n == 1 ? 0 : removal_choice(sb), true, rel_tol);
    out.ratio = out.phase * cont.value / ref.value;
    out.abs_error = std::abs(out.ratio) * (cont.abs_error / std::abs(cont.value) + ref.abs_error / std::abs(ref.value));
    return out;
}

}  // namespace msle
