// Acceptance suite: one line per criterion on stdout, per-check detail on stderr.
// usage: msle_acceptance [--criterion k[,k...]]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "msle/sle.hpp"
#include "msle/verify.hpp"

using namespace msle;

namespace {

using Reports = std::vector<CheckReport>;

Reports filter(const Reports& in, const std::function<bool(const CheckReport&)>& keep) {
    Reports out;
    for (const auto& r : in)
        if (keep(r)) out.push_back(r);
    return out;
}

Reports suites(std::initializer_list<const char*> names) {
    Reports out;
    for (const char* n : names) {
        auto r = run_suite(n, 1);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

CheckReport within(std::string name, std::string inputs, double measured, double reference, double tol) {
    return make_report(std::move(name), std::move(inputs), measured, reference, tol, false);
}

CheckReport at_most(std::string name, std::string inputs, double measured, double bound) {
    CheckReport r;
    r.name = std::move(name);
    r.inputs = std::move(inputs);
    r.measured = measured;
    r.reference = bound;
    r.tol = 0;
    r.relative = false;
    r.pass = measured <= bound;
    return r;
}

CheckReport at_least(std::string name, std::string inputs, double measured, double bound) {
    auto r = at_most(std::move(name), std::move(inputs), measured, bound);
    r.pass = measured > bound;
    return r;
}

// a recorded value that is not part of the verdict
CheckReport note(std::string name, std::string inputs, double value) {
    CheckReport r;
    r.name = std::move(name);
    r.inputs = std::move(inputs);
    r.measured = value;
    r.reference = value;
    r.pass = true;
    return r;
}

Reports monte_carlo() {
    Reports out;
    const std::uint64_t seed = 20240611;
    const double inf = std::numeric_limits<double>::infinity();
    {
        auto r = sle::rho_zero_experiment(5.0, 5000, seed);
        out.push_back(at_most("rho0_ks_distance", "kappa=5 n=5000 t=1", r.ks.statistic, 0.02));
    }
    for (const char* a : {"1-2.3-4", "1-4.2-3"}) {
        auto r = sle::resampling_experiment(5.0, LinkPattern::parse(a), {0, 1, 2, 3}, 2000, seed);
        out.push_back(at_least(std::string("resampling_ks_p_") + a, "kappa=5 x=(0,1,2,3) n=2000+2000", r.ks.p_value,
                               0.01));
        out.push_back(note(std::string("resampling_redrawn_") + a, "anomalous samples", static_cast<double>(r.anomalies)));
    }
    for (const auto& x : {std::vector<double>{0, 1, 2, 3}, std::vector<double>{0, 1, 3, 4}}) {
        std::string in = "kappa=6 " + fmt_points(x);
        auto h = sle::hitting_order_mc(6.0, x, 4000, seed);
        // SLE6 locality: the event is that of chordal SLE6 towards infinity
        auto p = sle::percolation_crossing_mc({x[0], x[1], x[2], inf}, (x[1] - x[0]) / 20.0, 10.0 * (x[2] - x[0]),
                                              4000, seed);
        double perc = 1.0 - p.estimate;
        double se = std::hypot(h.value.stderr_, p.stderr_);
        auto r = within("hitting_vs_percolation", in, h.value.estimate, perc, 3.0 * se);
        out.push_back(r);
        out.push_back(note("hitting_coarse_dt", in, h.coarse.estimate));
        out.push_back(note("hitting_cardy_reference", in, sle::cardy_value(1.0 - (x[1] - x[0]) / (x[2] - x[0]))));
    }
    {
        double s = std::sqrt(2.0);
        std::vector<double> x{0, 1, s, 1 + s};
        auto p = sle::percolation_crossing_mc(x, 1.0 / 80, 10.0 * (1 + s), 10000, seed);
        out.push_back(within("percolation_chi_half", "x=(0,1,sqrt2,1+sqrt2) mesh=1/80 n=10000", p.estimate, 0.5, 0.02));
    }
    return out;
}

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Reports()> run;
};

bool is_n1(const CheckReport& r) { return r.name == "n1_closed_form"; }

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string tok;
            while (std::getline(ss, tok, ',')) only.insert(std::stoi(tok));
        } else {
            std::fprintf(stderr, "usage: %s [--criterion k[,k...]]\n", argv[0]);
            return 2;
        }
    }
    const std::vector<Criterion> all{
        {1, "combinatorics", 1, [] { return suites({"combinatorics"}); }},
        {2, "integral identities", 10, [] { return filter(suites({"identities"}), [](auto& r) { return !is_n1(r); }); }},
        {3, "N=1 closed form", 5, [] { return filter(suites({"identities"}), is_n1); }},
        {4, "N=2 meander relation", 120, [] { return suites({"meander"}); }},
        {5, "special kappa", 120, [] { return suites({"special"}); }},
        {6, "sign structure", 60, [] { return suites({"sign"}); }},
        {7, "PDE and covariance", 300, [] { return suites({"pde"}); }},
        {8, "asymptotics and Frobenius", 300, [] { return suites({"asy", "frobenius"}); }},
        {9, "renormalized limits", 180, [] { return suites({"renorm"}); }},
        {10, "braid symmetry", 120, [] { return suites({"braid"}); }},
        {11, "bounds", 120, [] { return suites({"bounds"}); }},
        {12, "Monte Carlo", 1800, monte_carlo},
    };
    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.count(c.id)) continue;
        auto t0 = std::chrono::steady_clock::now();
        Reports reps;
        std::string error;
        try {
            reps = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        int bad = 0;
        for (const auto& r : reps) {
            bad += r.pass ? 0 : 1;
            std::fprintf(stderr, "  [%d] %-4s %-34s measured %.10g reference %.10g tol %.3g%s  %s\n", c.id,
                         r.pass ? "ok" : "FAIL", r.name.c_str(), r.measured, r.reference, r.tol,
                         r.relative ? " (rel)" : "", r.inputs.c_str());
        }
        bool in_time = secs <= c.budget_s;
        bool pass = error.empty() && !reps.empty() && bad == 0 && in_time;
        failed += pass ? 0 : 1;
        std::printf("criterion %2d %-4s %-26s %zu/%zu checks  %.2fs (budget %.0fs)%s%s\n", c.id, pass ? "PASS" : "FAIL",
                    c.title, reps.size() - bad, reps.size(), secs, c.budget_s, in_time ? "" : " over budget",
                    error.empty() ? "" : (" error: " + error).c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
