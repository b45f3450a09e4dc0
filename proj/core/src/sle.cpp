#include "msle/sle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "msle/partition.hpp"
#include "msle/quadrature.hpp"
#include "msle/specfun.hpp"

namespace msle::sle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Active {
    double x;   // signed image
    int label;  // point label, or -1 (left edge) / -2 (right edge)
};

// Points on one side of the tip, ordered by distance. Positions are kept as the distance of the
// innermost live point plus the gaps between neighbours, so near-coincident images stay resolved.
struct Side {
    double sg = 1.0;
    std::vector<int> lab;
    std::vector<double> gap;  // gap[k] = dist(lab[k+1]) - dist(lab[k])
    std::size_t first = 0;
    double inner = 0;

    std::vector<double> dists() const {
        std::vector<double> d(lab.size(), 0.0);
        if (first >= lab.size()) return d;
        d[first] = inner;
        for (std::size_t k = first + 1; k < lab.size(); ++k) d[k] = d[k - 1] + gap[k - 1];
        return d;
    }

    // drop the m innermost points; the next one becomes innermost at distance next_dist
    std::vector<int> take_front(std::size_t m, double next_dist) {
        std::vector<int> out(lab.begin() + first, lab.begin() + first + m);
        first += m;
        inner = next_dist;
        return out;
    }
};

class Chain {
public:
    Chain(const DriftSpec& d, double kappa, const std::vector<double>& x, int seed, const SimOptions& o,
          std::mt19937_64& r)
        : drift_(d), kappa_(kappa), opt_(o), rng_(r), seed_(seed), nx_(static_cast<int>(x.size())) {
        if (!(kappa > 0 && kappa < 8)) throw std::invalid_argument("simulate: kappa outside (0,8)");
        if (seed < 0 || seed >= nx_) throw std::invalid_argument("simulate: seed label out of range");
        if (!(o.dt > 0 && o.dt <= 1e-2)) throw std::invalid_argument("simulate: dt must lie in (0, 1e-2]");
        if (!(o.eta > 0 && o.eta < 0.1)) throw std::invalid_argument("simulate: eta must lie in (0, 0.1)");
        for (int i = 1; i < nx_; ++i)
            if (!(x[i] > x[i - 1])) throw std::invalid_argument("simulate: unsorted boundary points");
        if (!std::isfinite(x[seed])) throw std::invalid_argument("simulate: seed at infinity");
        double x0 = x[seed];
        auto add = [&](double p) {
            TrackedPoint tp;
            tp.x = p;
            tp.image = p - x0;
            tr_.points.push_back(tp);
            if (std::isfinite(p)) l0_ = std::max(l0_, std::abs(p - x0));
        };
        for (double p : x) add(p);
        for (double p : o.probes) {
            if (!std::isfinite(p) || p == x0) throw std::invalid_argument("simulate: bad probe");
            add(p);
        }
        if (!(l0_ > 0)) l0_ = 1.0;
        auto& s = tr_.points[seed];
        s.swallowed = true;
        s.tau = 0;
        s.image = 0;
        if (d.kind == DriftKind::KappaRho && static_cast<int>(d.rho.size()) != nx_)
            throw std::invalid_argument("simulate: one rho weight per boundary point");
        if (d.kind == DriftKind::Partition) {
            if (d.alpha.n() * 2 != nx_ || d.alpha.n() > 2)
                throw std::invalid_argument("simulate: partition drift needs N <= 2 and 2N points");
            for (int i = 0; i < nx_; ++i) live_.push_back(i);
            target_ = d.alpha.partner(seed + 1) - 1;
        } else {
            for (int i = 0; i < nx_; ++i)
                if (!std::isfinite(x[i])) throw std::invalid_argument("simulate: infinite point needs partition drift");
        }
        for (int l : o.stop_on)
            if (l < 0 || l >= static_cast<int>(tr_.points.size())) throw std::invalid_argument("simulate: bad stop label");
        right_.sg = 1.0;
        left_.sg = -1.0;
        for (int i = 0; i < static_cast<int>(tr_.points.size()); ++i) {
            double p = tr_.points[i].x;
            if (i == seed || !std::isfinite(p)) continue;
            (p > x0 ? right_ : left_).lab.push_back(i);
        }
        for (Side* sd : {&right_, &left_}) {
            auto& v = sd->lab;
            std::stable_sort(v.begin(), v.end(), [&](int u, int w) {
                return std::abs(tr_.points[u].x - x0) < std::abs(tr_.points[w].x - x0);
            });
            sd->gap.assign(v.size(), 0.0);
            for (std::size_t k = 0; k + 1 < v.size(); ++k)
                sd->gap[k] = std::abs(tr_.points[v[k + 1]].x - tr_.points[v[k]].x);
            if (!v.empty()) sd->inner = std::abs(tr_.points[v[0]].x - x0);
        }
    }

    Trajectory run() {
        while (true) {
            if (!tr_.stop.empty()) break;
            if (tr_.t >= opt_.t_max) {
                tr_.stop = "t_max";
                break;
            }
            if (tr_.steps >= opt_.max_steps) {
                tr_.stop = "max_steps";
                break;
            }
            collect();
            if (act_.empty() && !std::isfinite(opt_.t_max)) {
                tr_.stop = "no-points";
                break;
            }
            if (!act_.empty() && try_shortcut()) continue;
            step();
        }
        refresh();
        for (const Side* sd : {&right_, &left_}) {
            double off = 0;
            for (std::size_t k = sd->first; k < sd->lab.size(); ++k) {
                tr_.points[sd->lab[k]].offset = sd->sg * off;
                if (k + 1 < sd->lab.size()) off += sd->gap[k];
            }
        }
        for (auto& p : tr_.points)
            if (p.swallowed && p.tau > 0) p.image = side(p) > 0 ? xr_ : xl_;
        return tr_;
    }

private:
    const DriftSpec& drift_;
    double kappa_;
    const SimOptions& opt_;
    std::mt19937_64& rng_;
    int seed_, nx_;
    Trajectory tr_;
    double l0_ = 0;
    double xl_ = 0, xr_ = 0, rhol_ = 0, rhor_ = 0;
    std::vector<int> live_;  // partition drift: boundary labels still in the pattern
    int target_ = -1;
    std::vector<Active> act_;
    Side right_, left_;

    double side(const TrackedPoint& p) const { return p.x > tr_.points[seed_].x ? 1.0 : -1.0; }
    bool edges_active() const { return drift_.kind == DriftKind::KappaRho; }

    void refresh() {
        for (const Side* sd : {&right_, &left_}) {
            auto d = sd->dists();
            for (std::size_t k = sd->first; k < sd->lab.size(); ++k) tr_.points[sd->lab[k]].image = sd->sg * d[k];
        }
    }

    void collect() {
        refresh();
        act_.clear();
        for (const Side* sd : {&right_, &left_})
            for (std::size_t k = sd->first; k < sd->lab.size(); ++k)
                act_.push_back({tr_.points[sd->lab[k]].image, sd->lab[k]});
        if (edges_active()) {
            if (rhol_ != 0) act_.push_back({xl_, -1});
            if (rhor_ != 0) act_.push_back({xr_, -2});
        }
    }

    double dref() const { return std::max(l0_, std::sqrt(tr_.t)); }

    double rho_of(int label) const {
        if (label == -1) return rhol_;
        if (label == -2) return rhor_;
        if (label < nx_) return drift_.rho[label];
        return 0.0;
    }

    double drift() const {
        switch (drift_.kind) {
        case DriftKind::Chordal:
            return 0.0;
        case DriftKind::KappaRho: {
            double d = 0;
            for (int i = 0; i < nx_; ++i) {
                const auto& p = tr_.points[i];
                if (i != seed_ && !p.swallowed && drift_.rho[i] != 0) d -= drift_.rho[i] / p.image;
            }
            if (rhor_ != 0 && xr_ > 0) d -= rhor_ / xr_;
            if (rhol_ != 0 && xl_ < 0) d -= rhol_ / xl_;
            return d;
        }
        case DriftKind::Partition: {
            std::vector<double> y;
            int k = -1;
            for (int l : live_) {
                if (l == seed_) k = static_cast<int>(y.size());
                y.push_back(l == seed_ ? 0.0 : tr_.points[l].image);
            }
            LinkPattern a = live_.size() == 4 ? drift_.alpha : LinkPattern({{1, 2}});
            return partition_drift(kappa_, a, y, k);
        }
        }
        return 0.0;
    }

    bool try_shortcut() {
        auto it = std::min_element(act_.begin(), act_.end(),
                                   [](const Active& u, const Active& v) { return std::abs(u.x) < std::abs(v.x); });
        double a = std::abs(it->x);
        double sg = it->label == -1 ? -1.0 : it->label == -2 ? 1.0 : (it->x > 0 ? 1.0 : -1.0);
        std::vector<int> cl;
        double d = dref();
        for (const auto& e : act_) {
            double es = e.label == -1 ? -1.0 : e.label == -2 ? 1.0 : (e.x > 0 ? 1.0 : -1.0);
            if (es == sg && std::abs(e.x) <= a * (1.0 + opt_.eta))
                cl.push_back(e.label);
            else
                d = std::min(d, std::abs(e.x));
        }
        if (!(a <= opt_.eta * d)) return false;
        double b = 2.0 * opt_.eta * d;
        double rho = 0;
        if (drift_.kind == DriftKind::KappaRho)
            for (int l : cl) rho += rho_of(l);
        else if (drift_.kind == DriftKind::Partition && a > 0)
            rho = -sg * a * drift();
        double delta = 1.0 + 2.0 * (rho + 2.0) / kappa_;
        double p_hit = delta < 2.0 ? (a > 0 ? 1.0 - std::pow(a / b, 2.0 - delta) : 1.0) : 0.0;
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
        ++tr_.shortcuts;
        bool hit = u < p_hit;
        std::size_t m = 0;
        for (int l : cl) {
            if (l >= 0) ++m;
            else if (hit && rho_of(l) <= -2.0) {
                tr_.stop = "continuation";
                return true;
            }
        }
        Side& sd = sg > 0 ? right_ : left_;
        auto dist = sd.dists();
        std::size_t last = sd.first + m;  // first point outside the cluster
        if (hit && m > 0) {
            if (sg > 0) xr_ = 0;
            else xl_ = 0;
            double next = last < sd.lab.size() ? dist[last] : 0.0;
            swallow(sd.take_front(m, next), sg);
            return true;
        }
        // escape to b; an edge that is hit reflects and leaves the same way
        double f = a > 0 ? b / a : 0.0;
        for (int l : cl) {
            if (l == -2) xr_ = a > 0 ? xr_ * f : b;
            if (l == -1) xl_ = a > 0 ? xl_ * f : -b;
        }
        if (m > 0) {
            sd.inner *= f;
            for (std::size_t k = sd.first; k + 1 < last; ++k) sd.gap[k] *= f;
            if (last < sd.lab.size()) sd.gap[last - 1] = dist[last] - dist[last - 1] * f;
        }
        return true;
    }

    void swallow(const std::vector<int>& labels, double sg) {
        long ev = tr_.events++;
        for (int l : labels) {
            auto& p = tr_.points[l];
            p.swallowed = true;
            p.tau = tr_.t;
            p.event = ev;
            if (drift_.kind == DriftKind::KappaRho && l < nx_) {
                if (sg > 0) rhor_ += drift_.rho[l];
                else rhol_ += drift_.rho[l];
            }
        }
        if (drift_.kind == DriftKind::KappaRho && (rhor_ <= -2.0 || rhol_ <= -2.0)) {
            tr_.stop = "continuation";
            return;
        }
        if (drift_.kind == DriftKind::Partition) {
            std::vector<int> marked;
            for (int l : labels)
                if (l < nx_) marked.push_back(l);
            if (!marked.empty()) {
                bool has_target = std::find(marked.begin(), marked.end(), target_) != marked.end();
                if (has_target) {
                    tr_.stop = marked.size() == 1 ? "target" : "anomaly";
                    return;
                }
                // every swallowed marked point must arrive with its partner
                std::vector<int> drop;
                for (int l : marked) {
                    int q = drift_.alpha.partner(l + 1) - 1;
                    if (std::find(marked.begin(), marked.end(), q) == marked.end()) {
                        tr_.stop = "anomaly";
                        return;
                    }
                    drop.push_back(l);
                }
                std::vector<int> keep;
                for (int l : live_)
                    if (std::find(drop.begin(), drop.end(), l) == drop.end()) keep.push_back(l);
                live_ = keep;
            }
        }
        for (int l : opt_.stop_on)
            if (tr_.points[l].swallowed) {
                tr_.stop = "stop-set";
                return;
            }
    }

    // square-root map on one side; returns the points that crossed the tip
    std::vector<int> advance(Side& sd, double dt, double dw) {
        if (sd.first >= sd.lab.size()) return {};
        auto d = sd.dists();
        std::size_t n = sd.lab.size();
        std::vector<double> dn(n, 0.0);
        for (std::size_t k = sd.first; k < n; ++k) dn[k] = std::sqrt(d[k] * d[k] + 4.0 * dt);
        for (std::size_t k = sd.first; k + 1 < n; ++k) sd.gap[k] *= (d[k] + d[k + 1]) / (dn[k] + dn[k + 1]);
        sd.inner = dn[sd.first] - sd.sg * dw;
        if (sd.inner > 0) return {};
        double cum = sd.inner;
        std::size_t m = 1;
        while (sd.first + m < n && cum + sd.gap[sd.first + m - 1] <= 0) {
            cum += sd.gap[sd.first + m - 1];
            ++m;
        }
        double next = sd.first + m < n ? cum + sd.gap[sd.first + m - 1] : 0.0;
        return sd.take_front(m, next);
    }

    void step() {
        double a = kInf;
        for (const auto& e : act_) a = std::min(a, std::abs(e.x));
        double dt = opt_.dt * (std::isfinite(a) ? a * a : dref() * dref());
        if (tr_.t + dt > opt_.t_max) dt = opt_.t_max - tr_.t;
        double dw = drift() * dt + std::sqrt(kappa_ * dt) * std::normal_distribution<double>(0.0, 1.0)(rng_);
        auto right = advance(right_, dt, dw);
        auto left = advance(left_, dt, dw);
        xr_ = std::sqrt(xr_ * xr_ + 4.0 * dt) - dw;
        xl_ = -std::sqrt(xl_ * xl_ + 4.0 * dt) - dw;
        bool touch_r = xr_ <= 0, touch_l = xl_ >= 0;
        if (touch_r) xr_ = 0;
        if (touch_l) xl_ = 0;
        tr_.t += dt;
        tr_.W += dw;
        ++tr_.steps;
        if (edges_active() && ((touch_r && rhor_ <= -2.0) || (touch_l && rhol_ <= -2.0))) {
            tr_.stop = "continuation";
            return;
        }
        if (!right.empty()) {
            xr_ = 0;
            swallow(right, 1.0);
        }
        if (!left.empty() && tr_.stop.empty()) {
            xl_ = 0;
            swallow(left, -1.0);
        }
    }
};

// z -> -1/(z - x4): sends x4 to infinity, keeps the order of the points left of x4
double to_frame(double z, double x4) { return -1.0 / (z - x4); }

McEstimate finish(std::vector<double> ind) {
    McEstimate m;
    long n = static_cast<long>(ind.size()), hits = 0;
    for (double v : ind) hits += v != 0 ? 1 : 0;
    m.n = n;
    m.hits = hits;
    m.samples = std::move(ind);
    m.estimate = n > 0 ? static_cast<double>(hits) / n : 0.0;
    m.stderr_ = n > 1 ? std::sqrt(m.estimate * (1.0 - m.estimate) / n) : 0.0;
    return m;
}

void check_four(const std::vector<double>& x) {
    if (x.size() != 4) throw std::invalid_argument("need 4 boundary points");
    for (int i = 1; i < 4; ++i)
        if (!(x[i] > x[i - 1])) throw std::invalid_argument("unsorted boundary points");
    for (int i = 0; i < 3; ++i)
        if (!std::isfinite(x[i])) throw std::invalid_argument("non-finite boundary point");
}

}  // namespace

double partition_drift(double kappa, const LinkPattern& alpha, std::vector<double> y, int k) {
    int n = alpha.n();
    if (!(n == 1 || n == 2) || static_cast<int>(y.size()) != 2 * n || k < 0 || k >= 2 * n)
        throw std::invalid_argument("partition_drift: need N <= 2, 2N points and a seed index");
    double big = 1.0;
    for (double v : y)
        if (std::isfinite(v)) big = std::max(big, std::abs(v));
    for (double& v : y)
        if (!std::isfinite(v)) v = 1e9 * big;
    if (n == 2) {
        // a linked pair merged to rounding level factors out of Z
        int t = alpha.partner(k + 1) - 1, p = -1, q = -1;
        for (int i = 0; i < 4; ++i)
            if (i != k && i != t) (p < 0 ? p : q) = i;
        if (std::abs(y[q] - y[p]) <= 1e-12 * std::max(std::abs(y[p]), std::abs(y[q]))) {
            std::vector<double> y2;
            int k2 = -1;
            for (int i = 0; i < 4; ++i) {
                if (i == p || i == q) continue;
                if (i == k) k2 = static_cast<int>(y2.size());
                y2.push_back(y[i]);
            }
            return kappa * pure_Z_log_grad(kappa, LinkPattern({{1, 2}}), y2)[k2];
        }
        for (int i = 1; i < 4; ++i) y[i] = std::max(y[i], std::nextafter(y[i - 1], kInf));
    }
    return kappa * pure_Z_log_grad(kappa, alpha, y)[k];
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t chain) {
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(chain), static_cast<std::uint32_t>(chain >> 32)};
    return std::mt19937_64(sq);
}

Trajectory simulate(const DriftSpec& drift, double kappa, const std::vector<double>& x, int seed_label,
                    const SimOptions& opt, std::mt19937_64& rng) {
    Chain c(drift, kappa, x, seed_label, opt, rng);
    return c.run();
}

Trajectory simulate(const DriftSpec& drift, double kappa, const std::vector<double>& x, int seed_label,
                    const SimOptions& opt, std::uint64_t seed, std::uint64_t chain) {
    auto rng = make_stream(seed, chain);
    return simulate(drift, kappa, x, seed_label, opt, rng);
}

std::vector<double> flow_points(const std::vector<double>& w, double dt, const std::vector<double>& y) {
    std::vector<double> g = y;
    for (std::size_t k = 0; k + 1 < w.size(); ++k)
        for (auto& z : g) {
            double d = z - w[k];
            z = w[k] + (d >= 0 ? 1.0 : -1.0) * std::sqrt(d * d + 4.0 * dt);
        }
    return g;
}

double kolmogorov_q(double lambda) {
    if (lambda < 0.2) return 1.0;
    double s = 0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-17) break;
    }
    return std::clamp(s, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0, na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    KsResult r;
    r.statistic = d;
    double ne = na * nb / (na + nb);
    r.p_value = kolmogorov_q((std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d);
    return r;
}

KsResult ks_normal(std::vector<double> a) {
    if (a.empty()) throw std::invalid_argument("ks_normal: empty sample");
    std::sort(a.begin(), a.end());
    double n = static_cast<double>(a.size()), d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double f = 0.5 * std::erfc(-a[i] / std::sqrt(2.0));
        d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_q((std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d);
    return r;
}

RhoZeroResult rho_zero_experiment(double kappa, int n_samples, std::uint64_t seed, double dt) {
    if (n_samples < 1) throw std::invalid_argument("rho_zero_experiment: no samples");
    DriftSpec d;
    d.kind = DriftKind::KappaRho;
    d.rho = {0.0, 0.0, 0.0};
    SimOptions o;
    o.dt = dt;
    o.t_max = 1.0;
    RhoZeroResult r;
    for (int i = 0; i < n_samples; ++i) {
        auto tr = simulate(d, kappa, {-1.0, 0.0, 1.0}, 1, o, seed, static_cast<std::uint64_t>(i));
        r.samples.push_back(tr.W / std::sqrt(kappa * tr.t));
    }
    r.ks = ks_normal(r.samples);
    return r;
}

ResamplingResult resampling_experiment(double kappa, const LinkPattern& alpha, const std::vector<double>& x,
                                       int n_samples, std::uint64_t seed, double dt) {
    if (!(kappa > 4 && kappa < 8)) throw std::invalid_argument("resampling_experiment: kappa outside (4,8)");
    if (n_samples < 500) throw std::invalid_argument("resampling_experiment: insufficient samples (< 500)");
    check_four(x);
    if (!std::isfinite(x[3])) throw std::invalid_argument("resampling_experiment: x4 must be finite");
    bool rainbow = alpha == LinkPattern::parse("1-4.2-3");
    if (!rainbow && alpha != LinkPattern::parse("1-2.3-4"))
        throw std::invalid_argument("resampling_experiment: alpha must be 1-2.3-4 or 1-4.2-3");
    std::vector<double> y{to_frame(x[0], x[3]), to_frame(x[1], x[3]), to_frame(x[2], x[3]), kInf};
    double L = y[2] - y[0];
    // the infinite curve starts at y3 (parallel) or y1 (rainbow); probes on its far side
    int inf_start = rainbow ? 0 : 2;
    int fin_start = rainbow ? 1 : 0;
    double dir = rainbow ? -1.0 : 1.0;
    std::vector<double> probes;
    for (int k = 0; k < 30; ++k) probes.push_back(y[inf_start] + dir * L * 0.1 * std::pow(1.35, k));

    DriftSpec pd;
    pd.kind = DriftKind::Partition;
    pd.alpha = alpha;
    ResamplingResult res;
    res.frame = y;
    int q0 = 4;

    auto count_j = [&](const Trajectory& tr, int first_probe) {
        long ev = tr.points[first_probe].event;
        int j = 0;
        for (int k = 0; k < 30; ++k)
            if (tr.points[first_probe + k].swallowed && tr.points[first_probe + k].event == ev) ++j;
        return static_cast<double>(j);
    };

    std::uint64_t base = static_cast<std::uint64_t>(n_samples);
    for (int route = 0; route < 2; ++route) {
        auto& out = route == 0 ? res.route_a : res.route_b;
        for (int i = 0; i < n_samples; ++i) {
            for (std::uint64_t attempt = 0;; ++attempt) {
                std::uint64_t chain = 2 * (i + base * attempt) + route;
                auto rng = make_stream(seed, chain);
                SimOptions o;
                o.dt = dt;
                o.probes = probes;
                if (route == 0) {
                    auto t1 = simulate(pd, kappa, y, fin_start, o, rng);
                    if (t1.stop != "target") {
                        ++res.anomalies;
                        continue;
                    }
                    // restart from the infinite-curve start; probes at their offsets from it
                    SimOptions o2;
                    o2.dt = dt;
                    bool ok = true;
                    for (int k = 0; k < 30; ++k) {
                        const auto& q = t1.points[q0 + k];
                        ok = ok && !q.swallowed && q.offset != 0.0;
                        o2.probes.push_back(q.offset);
                    }
                    if (!ok) {
                        ++res.anomalies;
                        continue;
                    }
                    o2.stop_on = {1};
                    DriftSpec cd;
                    auto t2 = simulate(cd, kappa, {0.0}, 0, o2, rng);
                    if (t2.stop != "stop-set") {
                        ++res.anomalies;
                        continue;
                    }
                    out.push_back(count_j(t2, 1));
                } else {
                    o.stop_on = {q0};
                    auto t = simulate(pd, kappa, y, inf_start, o, rng);
                    if (t.stop != "stop-set") {
                        ++res.anomalies;
                        continue;
                    }
                    out.push_back(count_j(t, q0));
                }
                break;
            }
        }
    }
    res.ks = ks_two_sample(res.route_a, res.route_b);
    return res;
}

HittingResult hitting_order_mc(double kappa, const std::vector<double>& x, int n_samples, std::uint64_t seed,
                               double dt) {
    if (!(kappa > 4 && kappa < 8))
        throw std::invalid_argument("hitting_order_mc: kappa must lie in (4,8) (the event is degenerate for kappa <= 4)");
    if (n_samples < 1) throw std::invalid_argument("hitting_order_mc: no samples");
    check_four(x);
    if (!std::isfinite(x[3])) throw std::invalid_argument("hitting_order_mc: x4 must be finite");
    // frame with the target x4 at infinity; 0 is the image of the original infinity
    std::vector<double> y{to_frame(x[0], x[3]), to_frame(x[1], x[3]), to_frame(x[2], x[3])};
    DriftSpec cd;
    auto run = [&](double h, double eta, std::uint64_t salt) {
        std::vector<double> ind;
        for (int i = 0; i < n_samples; ++i) {
            SimOptions o;
            o.dt = h;
            o.eta = eta;
            o.probes = {0.0};
            o.stop_on = {1, 3};
            auto tr = simulate(cd, kappa, y, 0, o, seed, 2 * static_cast<std::uint64_t>(i) + salt);
            bool ev = tr.points[3].swallowed || (tr.points[1].event == tr.points[2].event);
            ind.push_back(ev ? 1.0 : 0.0);
        }
        return finish(std::move(ind));
    };
    HittingResult r;
    SimOptions def;
    r.coarse = run(dt, def.eta, 0);
    r.refined = run(0.5 * dt, 0.5 * def.eta, 1);
    r.value = r.refined;
    return r;
}

McEstimate percolation_crossing_mc(const std::vector<double>& x, double mesh, double radius, int n_samples,
                                   std::uint64_t seed) {
    check_four(x);
    bool open_end = !std::isfinite(x[3]);
    double span = (open_end ? x[2] : x[3]) - x[0];
    if (!(mesh > 0 && mesh <= (x[1] - x[0]) / 20.0 * (1 + 1e-12)))
        throw std::invalid_argument("percolation_crossing_mc: mesh must be <= (x2-x1)/20");
    if (!(radius >= 10.0 * span * (1 - 1e-12))) throw std::invalid_argument("percolation_crossing_mc: radius must be >= 10 (x4-x1)");
    if (n_samples < 1) throw std::invalid_argument("percolation_crossing_mc: no samples");
    double c = open_end ? 0.5 * (x[0] + x[2]) : 0.5 * (x[0] + x[3]);
    double hrow = mesh * std::sqrt(3.0) / 2.0;
    int rows = static_cast<int>(std::floor(radius / hrow)) + 1;
    // row j holds sites c + mesh (i + (j odd)/2), i in [lo_j, hi_j]
    std::vector<int> lo(rows), hi(rows);
    std::vector<long> off(rows + 1, 0);
    int nrows = 0;
    for (int j = 0; j < rows; ++j) {
        double y = j * hrow;
        double half = radius * radius - y * y;
        if (half <= 0) break;
        double w = std::sqrt(half);
        double sh = (j & 1) ? 0.5 : 0.0;
        lo[j] = static_cast<int>(std::ceil(-w / mesh - sh + 1e-12));
        hi[j] = static_cast<int>(std::floor(w / mesh - sh - 1e-12));
        if (hi[j] < lo[j]) break;
        off[j + 1] = off[j] + (hi[j] - lo[j] + 1);
        nrows = j + 1;
    }
    long nsites = off[nrows];
    auto pos_x = [&](int j, int i) { return c + mesh * (i + ((j & 1) ? 0.5 : 0.0)); };
    std::vector<std::uint8_t> kind(nsites, 0);  // 1 source, 2 target
    for (int j = 0; j < nrows; ++j)
        for (int i = lo[j]; i <= hi[j]; ++i) {
            long s = off[j] + (i - lo[j]);
            double px = pos_x(j, i), py = j * hrow;
            if (std::hypot(px - c, py) > radius - mesh) kind[s] = 2;
            if (j == 0) {
                if (px > x[1] && px < x[2]) kind[s] = 1;
                else if (px < x[0] || (!open_end && px > x[3])) kind[s] = 2;
            }
        }
    std::vector<std::uint32_t> stamp(nsites, 0);
    std::vector<std::uint8_t> state(nsites, 0);  // bit0 open, bit1 visited
    std::vector<long> queue;
    std::vector<double> ind;
    for (int n = 0; n < n_samples; ++n) {
        auto rng = make_stream(seed, static_cast<std::uint64_t>(n));
        std::uint32_t cur = static_cast<std::uint32_t>(n + 1);
        auto open = [&](long s) {
            if (stamp[s] != cur) {
                stamp[s] = cur;
                state[s] = (rng() >> 63) ? 1 : 0;
            }
            return (state[s] & 1) != 0;
        };
        queue.clear();
        for (int i = lo[0]; i <= hi[0]; ++i) {
            long s = i - lo[0];
            if (kind[s] == 1 && open(s)) {
                state[s] |= 2;
                queue.push_back(s);
            }
        }
        bool crossed = false;
        for (std::size_t q = 0; q < queue.size() && !crossed; ++q) {
            long s = queue[q];
            int j = static_cast<int>(std::upper_bound(off.begin(), off.begin() + nrows + 1, s) - off.begin()) - 1;
            int i = static_cast<int>(s - off[j]) + lo[j];
            int dl = (j & 1) ? 0 : -1;  // column shift to the lower-left neighbour in adjacent rows
            int nb[6][2] = {{j, i - 1}, {j, i + 1}, {j - 1, i + dl}, {j - 1, i + dl + 1}, {j + 1, i + dl}, {j + 1, i + dl + 1}};
            for (auto& v : nb) {
                int jj = v[0], ii = v[1];
                if (jj < 0 || jj >= nrows || ii < lo[jj] || ii > hi[jj]) continue;
                long t = off[jj] + (ii - lo[jj]);
                if (!open(t) || (state[t] & 2)) continue;
                state[t] |= 2;
                if (kind[t] == 2) {
                    crossed = true;
                    break;
                }
                queue.push_back(t);
            }
        }
        ind.push_back(crossed ? 1.0 : 0.0);
    }
    return finish(std::move(ind));
}

double cardy_value(double chi) {
    if (!(chi > 0 && chi < 1)) throw std::invalid_argument("cardy_value: chi outside (0,1)");
    double norm = gamma_fn(2.0 / 3.0) / std::pow(gamma_fn(1.0 / 3.0), 2);
    if (chi >= 0.5) {
        auto r = quad::jacobi_weighted([](double u) { return std::pow(u, -2.0 / 3.0); }, chi, 1.0, 0.0, -2.0 / 3.0,
                                       chi, kInf, 1e-14);
        return norm * r.value;
    }
    auto r = quad::jacobi_weighted([](double u) { return std::pow(1.0 - u, -2.0 / 3.0); }, 0.0, chi, -2.0 / 3.0, 0.0,
                                   kInf, 1.0 - chi, 1e-14);
    return 1.0 - norm * r.value;
}

}  // namespace msle::sle
