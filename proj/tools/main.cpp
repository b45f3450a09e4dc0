#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cliutil.hpp"
#include "msle/linkpat.hpp"
#include "msle/partition.hpp"
#include "msle/sle.hpp"
#include "msle/specfun.hpp"
#include "msle/verify.hpp"

using namespace msle;
using cli::ConfigError;
using cli::CsvTable;
using cli::fmt_num;
using cli::RunConfig;
using nlohmann::json;

namespace {

int threads_from_env() {
    const char* s = std::getenv("MSLE_THREADS");
    if (!s || !*s) return 1;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (*end || v < 1) throw ConfigError(std::string("MSLE_THREADS must be a positive integer, got '") + s + "'");
    return static_cast<int>(v);
}

LinkPattern pattern_arg(const RunConfig& rc, const std::string& key, const std::string& def = "") {
    std::string s = rc.str(key, def);
    if (s.empty()) throw ConfigError("missing --" + key);
    try {
        return LinkPattern::parse(s);
    } catch (const std::exception& e) {
        throw ConfigError("bad pattern '" + s + "': " + e.what());
    }
}

int cmd_lp(const RunConfig& rc) {
    std::string action = rc.str("action", "enumerate");
    CsvTable t;
    if (action == "enumerate") {
        long n = rc.integer("n", 2);
        if (n < 1 || n > 8) throw ConfigError("--n must lie in [1,8]");
        t.header = {"index", "pattern"};
        auto list = enumerate_patterns(static_cast<int>(n));
        for (std::size_t i = 0; i < list.size(); ++i) t.rows.push_back({std::to_string(i), list[i].str()});
    } else if (action == "loops") {
        t.header = {"alpha", "beta", "loops"};
        if (rc.has("alpha") || rc.has("beta")) {
            auto a = pattern_arg(rc, "alpha"), b = pattern_arg(rc, "beta");
            if (a.n() != b.n()) throw ConfigError("alpha and beta differ in size");
            t.rows.push_back({a.str(), b.str(), std::to_string(meander_loops(a, b))});
        } else {
            long n = rc.integer("n", 2);
            if (n < 1 || n > 6) throw ConfigError("--n must lie in [1,6]");
            auto list = enumerate_patterns(static_cast<int>(n));
            for (const auto& a : list)
                for (const auto& b : list) t.rows.push_back({a.str(), b.str(), std::to_string(meander_loops(a, b))});
        }
    } else if (action == "matrix") {
        long n = rc.integer("n", 2);
        if (n < 1 || n > 6) throw ConfigError("--n must lie in [1,6]");
        double nu = rc.has("nu") ? rc.num("nu") : kappa_params(rc.num("kappa")).nu;
        auto list = enumerate_patterns(static_cast<int>(n));
        auto m = meander_matrix(static_cast<int>(n), nu);
        t.header = {"pattern"};
        for (const auto& p : list) t.header.push_back(p.str());
        for (std::size_t i = 0; i < list.size(); ++i) {
            std::vector<std::string> r{list[i].str()};
            for (std::size_t j = 0; j < list.size(); ++j) r.push_back(fmt_num(m(i, j)));
            t.rows.push_back(r);
        }
    } else {
        throw ConfigError("--action must be enumerate, loops or matrix");
    }
    cli::write_text(rc.csv_path, cli::to_csv(t));
    return 0;
}

int cmd_eval(const RunConfig& rc) {
    double kappa = rc.num("kappa");
    std::string what = rc.str("what", "F");
    auto beta = pattern_arg(rc, "pattern");
    bool reduced = what == "fused" || what == "z3";
    auto x = rc.points("x", !reduced);
    if (!(kappa > 0)) throw ConfigError("--kappa must be positive");
    if (!reduced && static_cast<int>(x.size()) != 2 * beta.n())
        throw ConfigError("--x needs " + std::to_string(2 * beta.n()) + " points for pattern " + beta.str());
    PartitionValue v;
    if (what == "F") {
        v = coulomb_F(kappa, beta, x);
    } else if (what == "H") {
        auto kp = kappa_params(kappa);
        if (!kp.c_defined) throw ConfigError("C(kappa) has a pole at this kappa; H is undefined");
        v = coulomb_F(kappa, beta, x);
        double cn = std::pow(kp.big_c, beta.n());
        v.value /= cn;
        v.abs_error /= std::abs(cn);
    } else if (what == "Z") {
        v = pure_Z(kappa, beta, x);
    } else if (what == "Fhat") {
        int m = exceptional_index(kappa);
        if (m == 1) v = fhat_eight(beta, x).value;
        else if (m % 2 == 1) v = fhat_odd(kappa, beta, x).value;
        else throw ConfigError("Fhat needs kappa = 8 or 8/(2m+1)");
    } else if (what == "Zhat") {
        if (exceptional_index(kappa) != 1) throw ConfigError("Zhat needs kappa = 8");
        v = zhat_eight(beta, x);
    } else if (what == "fused") {
        if (static_cast<int>(x.size()) != 2 * beta.n() - 1)
            throw ConfigError("fused needs x = xi,x3,...,x2N (" + std::to_string(2 * beta.n() - 1) + " points)");
        std::vector<double> rest(x.begin() + 1, x.end());
        v.value = kappa == 4.0 ? fused_F_kappa4(beta, x[0], rest) : fused_F(kappa, beta, x[0], rest);
        v.method = "fused";
    } else if (what == "z3") {
        if (x.size() != 3) throw ConfigError("z3 needs x = xi,x3,x4");
        v.value = z_three(kappa, x[0], x[1], x[2]);
        v.method = "z3";
    } else {
        throw ConfigError("--what must be one of F,H,Z,Fhat,Zhat,fused,z3");
    }
    CsvTable t;
    t.header = {"kappa", "pattern"};
    for (std::size_t i = 0; i < x.size(); ++i) t.header.push_back("x" + std::to_string(i + 1));
    t.header.insert(t.header.end(), {"value", "abs_error", "method"});
    std::vector<std::string> r{fmt_num(kappa), beta.str()};
    for (double xi : x) r.push_back(fmt_num(xi));
    r.insert(r.end(), {fmt_num(v.value), fmt_num(v.abs_error), v.method});
    t.rows.push_back(r);
    cli::write_text(rc.csv_path, cli::to_csv(t));
    return 0;
}

int cmd_check(const RunConfig& rc) {
    std::string suite = rc.str("suite", "all");
    auto names = suite_names();
    if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
        throw ConfigError("unknown suite '" + suite + "'");
    auto reports = run_suite(suite, rc.seed.value_or(1));
    bool json_stdout = rc.json_path == "-";
    (json_stdout ? std::cerr : std::cout) << cli::report_table(reports);
    if (!rc.json_path.empty()) cli::write_text(rc.json_path, cli::report_json(suite, reports).dump(2) + "\n");
    return cli::report_exit_code(reports);
}

json params_json(const RunConfig& rc) {
    json p = rc.params;
    p["seed"] = *rc.seed;
    p["threads"] = threads_from_env();
    return p;
}

double chi_of(const std::vector<double>& x) {
    if (!std::isfinite(x[3])) return (x[1] - x[0]) / (x[2] - x[0]);
    return cross_ratio(x[0], x[1], x[2], x[3]);
}

int cmd_mc(const RunConfig& rc) {
    if (!rc.seed) throw ConfigError("--seed is mandatory for mc");
    std::string exp = rc.str("experiment");
    long n = rc.integer("n", 1000);
    if (n < 1) throw ConfigError("--n must be positive");
    double dt = rc.num("dt", 1e-3);
    auto x = rc.points("x");
    if (x.size() != 4) throw ConfigError("--x needs 4 points");
    CsvTable t;
    json s;
    if (exp == "resample") {
        auto alpha = pattern_arg(rc, "pattern", "1-2.3-4");
        auto r = sle::resampling_experiment(rc.num("kappa", 5.0), alpha, x, static_cast<int>(n), *rc.seed, dt);
        t.header = {"route", "sample", "J"};
        double ma = 0, mb = 0;
        for (std::size_t i = 0; i < r.route_a.size(); ++i) {
            t.rows.push_back({"A", std::to_string(i), fmt_num(r.route_a[i])});
            ma += r.route_a[i];
        }
        for (std::size_t i = 0; i < r.route_b.size(); ++i) {
            t.rows.push_back({"B", std::to_string(i), fmt_num(r.route_b[i])});
            mb += r.route_b[i];
        }
        s = {{"estimate", r.ks.statistic},   {"stderr", nullptr},
             {"n", n},                       {"ks_p_value", r.ks.p_value},
             {"mean_J_route_a", ma / n},     {"mean_J_route_b", mb / n},
             {"anomalies_redrawn", r.anomalies}};
    } else if (exp == "hitting") {
        double kappa = rc.num("kappa", 6.0);
        auto r = sle::hitting_order_mc(kappa, x, static_cast<int>(n), *rc.seed, dt);
        t.header = {"sample", "event", "event_coarse"};
        for (long i = 0; i < n; ++i)
            t.rows.push_back({std::to_string(i), fmt_num(r.refined.samples[i]), fmt_num(r.coarse.samples[i])});
        s = {{"estimate", r.value.estimate}, {"stderr", r.value.stderr_}, {"n", n},
             {"coarse_estimate", r.coarse.estimate}, {"coarse_stderr", r.coarse.stderr_}};
        // SLE6 locality: the event does not depend on x4
        if (kappa == 6.0) s["cardy_reference"] = sle::cardy_value(1.0 - (x[1] - x[0]) / (x[2] - x[0]));
    } else if (exp == "percolation") {
        double span = (std::isfinite(x[3]) ? x[3] : x[2]) - x[0];
        double mesh = rc.num("mesh", (x[1] - x[0]) / 20.0);
        double radius = rc.num("radius", 10.0 * span);
        auto r = sle::percolation_crossing_mc(x, mesh, radius, static_cast<int>(n), *rc.seed);
        t.header = {"sample", "event"};
        for (long i = 0; i < n; ++i) t.rows.push_back({std::to_string(i), fmt_num(r.samples[i])});
        s = {{"estimate", r.estimate},
             {"stderr", r.stderr_},
             {"n", n},
             {"cardy_reference", sle::cardy_value(chi_of(x))}};
    } else {
        throw ConfigError("--experiment must be resample, hitting or percolation");
    }
    s["experiment"] = exp;
    s["params"] = params_json(rc);
    if (!rc.csv_path.empty()) cli::write_text(rc.csv_path, cli::to_csv(t));
    cli::write_text(rc.json_path, s.dump(2) + "\n");
    return 0;
}

int cmd_plotdata(const RunConfig& rc) {
    std::string kind = rc.str("kind");
    long pts = rc.integer("points", kind == "z_of_kappa" ? 300 : 99);
    if (pts < 2) throw ConfigError("--points must be at least 2");
    CsvTable t;
    auto sweep = [&](double lo, double hi, long i) { return lo + (hi - lo) * (i + 1.0) / (pts + 1.0); };
    if (kind == "F_vs_chi") {
        double kappa = rc.num("kappa", 5.0);
        auto beta = pattern_arg(rc, "pattern", "1-2.3-4");
        if (beta.n() != 2) throw ConfigError("F_vs_chi needs an N=2 pattern");
        double lo = rc.num("lo", 0.0), hi = rc.num("hi", 1.0);
        if (!(lo >= 0 && hi <= 1 && lo < hi)) throw ConfigError("F_vs_chi needs 0 <= lo < hi <= 1");
        t.header = {"chi", "x2", "F"};
        for (long i = 0; i < pts; ++i) {
            double chi = sweep(lo, hi, i), u = 2 * chi / (1 + chi);
            t.rows.push_back({fmt_num(chi), fmt_num(u), fmt_num(coulomb_F(kappa, beta, {0, u, 1, 2}).value)});
        }
    } else if (kind == "z_of_kappa") {
        double lo = rc.num("lo", 8.0 / 5.0), hi = rc.num("hi", 8.0 / 3.0);
        if (!(lo > 0 && lo < hi)) throw ConfigError("z_of_kappa needs 0 < lo < hi");
        t.header = {"kappa", "nu", "C", "z"};
        for (long i = 0; i < pts; ++i) {
            double k = sweep(lo, hi, i);
            auto kp = kappa_params(k);
            double z = std::nan("");
            try {
                z = sign_structure_N2(k);
            } catch (const std::exception&) {
            }
            t.rows.push_back({fmt_num(k), fmt_num(kp.nu), fmt_num(kp.c_defined ? kp.big_c : std::nan("")), fmt_num(z)});
        }
    } else if (kind == "frobenius_fit") {
        double kappa = rc.num("kappa", 5.0), x3 = rc.num("x3", 1.0), x4 = rc.num("x4", 2.5);
        auto beta = pattern_arg(rc, "pattern", "1-4.2-3");
        if (beta.n() != 2) throw ConfigError("frobenius_fit needs an N=2 pattern");
        if (!(x3 > 0 && x4 > x3)) throw ConfigError("frobenius_fit needs 0 < x3 < x4");
        double lo = rc.num("lo", 1e-3), hi = rc.num("hi", 1e-1);
        if (!(lo > 0 && lo < hi && hi < x3)) throw ConfigError("frobenius_fit needs 0 < lo < hi < x3");
        auto s = geometric_separations(lo, hi, static_cast<int>(pts));
        double h = kappa_params(kappa).h;
        std::vector<FrobTerm> terms{{-2 * h, 0}, {2 / kappa, 0}, {1 - 2 * h, 0}, {2 - 2 * h, 0}};
        std::vector<double> v;
        for (double e : s) v.push_back(coulomb_F(kappa, beta, {-0.5 * e, 0.5 * e, x3, x4}).value);
        auto fit = frobenius_fit(s, v, terms);
        t.header = {"s", "F", "fit"};
        for (std::size_t i = 0; i < s.size(); ++i) {
            double f = 0;
            for (std::size_t j = 0; j < terms.size(); ++j) f += fit.coef[j] * std::pow(s[i], terms[j].exponent);
            t.rows.push_back({fmt_num(s[i]), fmt_num(v[i]), fmt_num(f)});
        }
    } else if (kind == "mc_convergence") {
        if (!rc.seed) throw ConfigError("--seed is mandatory for mc_convergence");
        std::string exp = rc.str("experiment", "percolation");
        auto x = rc.points("x");
        if (x.size() != 4) throw ConfigError("--x needs 4 points");
        long n = rc.integer("n", 1000);
        if (n < 1) throw ConfigError("--n must be positive");
        sle::McEstimate m;
        if (exp == "hitting") {
            m = sle::hitting_order_mc(rc.num("kappa", 6.0), x, static_cast<int>(n), *rc.seed, rc.num("dt", 1e-3)).value;
        } else if (exp == "percolation") {
            double span = (std::isfinite(x[3]) ? x[3] : x[2]) - x[0];
            m = sle::percolation_crossing_mc(x, (x[1] - x[0]) / 20.0, 10.0 * span, static_cast<int>(n), *rc.seed);
        } else {
            throw ConfigError("mc_convergence supports hitting or percolation");
        }
        t.header = {"n", "estimate", "stderr"};
        double hits = 0;
        for (long i = 0; i < n; ++i) {
            hits += m.samples[i];
            double p = hits / (i + 1.0);
            t.rows.push_back({std::to_string(i + 1), fmt_num(p), fmt_num(std::sqrt(p * (1 - p) / (i + 1.0)))});
        }
    } else {
        throw ConfigError("--kind must be F_vs_chi, z_of_kappa, frobenius_fit or mc_convergence");
    }
    cli::write_text(rc.csv_path, cli::to_csv(t));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"msle: multiple-SLE partition functions, checks and Monte Carlo"};
    app.require_subcommand(1);
    std::map<std::string, std::map<std::string, std::string>> store;
    std::map<std::string, std::string> config_file;
    std::map<std::string, CLI::App*> subs;
    const std::map<std::string, std::string> about{
        {"lp", "link patterns: enumerate, loops, meander matrix"},
        {"eval", "evaluate F, H, Z, Fhat, Zhat, fused or z3"},
        {"check", "run a verification suite"},
        {"mc", "Monte Carlo: resample, hitting, percolation"},
        {"plotdata", "CSV for F_vs_chi, z_of_kappa, frobenius_fit, mc_convergence"},
    };
    for (const auto& [name, desc] : about) {
        auto* sub = app.add_subcommand(name, desc);
        subs[name] = sub;
        sub->add_option("--config", config_file[name], "key=value file; flags override it");
        for (const auto& k : cli::allowed_keys(name)) sub->add_option("--" + k, store[name][k]);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        threads_from_env();
        for (const auto& [name, sub] : subs) {
            if (!sub->parsed()) continue;
            std::map<std::string, std::string> flags, file;
            for (const auto& k : cli::allowed_keys(name))
                if (sub->get_option("--" + k)->count() > 0) flags[k] = store[name][k];
            if (!config_file[name].empty()) file = cli::read_config_file(config_file[name]);
            auto rc = cli::merge_config(name, file, flags);
            if (name == "lp") return cmd_lp(rc);
            if (name == "eval") return cmd_eval(rc);
            if (name == "check") return cmd_check(rc);
            if (name == "mc") return cmd_mc(rc);
            return cmd_plotdata(rc);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
