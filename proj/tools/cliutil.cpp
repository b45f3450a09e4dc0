#include "cliutil.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace msle::cli {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& allowed_keys(const std::string& command) {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"lp", {"action", "n", "nu", "kappa", "alpha", "beta", "csv"}},
        {"eval", {"kappa", "pattern", "x", "what", "csv"}},
        {"check", {"suite", "seed", "json"}},
        {"mc", {"experiment", "kappa", "x", "n", "dt", "seed", "pattern", "mesh", "radius", "csv", "json"}},
        {"plotdata",
         {"kind", "kappa", "pattern", "lo", "hi", "points", "x3", "x4", "experiment", "x", "n", "dt", "seed", "csv"}},
    };
    auto it = keys.find(command);
    if (it == keys.end()) throw ConfigError("unknown command '" + command + "'");
    return it->second;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        auto h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(no) + ": expected key=value");
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (k.empty()) throw ConfigError(path + ":" + std::to_string(no) + ": empty key");
        out[k] = v;
    }
    return out;
}

RunConfig merge_config(const std::string& command, const std::map<std::string, std::string>& file,
                       const std::map<std::string, std::string>& flags) {
    const auto& ok = allowed_keys(command);
    RunConfig rc;
    rc.command = command;
    for (const auto* src : {&file, &flags})
        for (const auto& [k, v] : *src) {
            if (std::find(ok.begin(), ok.end(), k) == ok.end())
                throw ConfigError("unknown key '" + k + "' for command " + command);
            rc.params[k] = v;
        }
    if (auto it = rc.params.find("seed"); it != rc.params.end()) {
        const std::string& s = it->second;
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || s.empty())
            throw ConfigError("malformed seed '" + s + "'");
        rc.seed = v;
        rc.params.erase(it);
    }
    if (auto it = rc.params.find("csv"); it != rc.params.end()) {
        rc.csv_path = it->second;
        rc.params.erase(it);
    }
    if (auto it = rc.params.find("json"); it != rc.params.end()) {
        rc.json_path = it->second;
        rc.params.erase(it);
    }
    return rc;
}

double parse_number(const std::string& s) {
    std::string t = trim(s);
    double v = 0;
    const char* b = t.data();
    if (!t.empty() && t[0] == '+') ++b;
    auto [p, ec] = std::from_chars(b, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || p != t.data() + t.size() || std::isnan(v))
        throw ConfigError("malformed number '" + s + "'");
    return v;
}

std::vector<double> parse_points(const std::string& s, bool even_count) {
    std::vector<double> x;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) x.push_back(parse_number(item));
    if (!s.empty() && s.back() == ',') throw ConfigError("malformed number ''");
    if (x.empty()) throw ConfigError("empty point list");
    if (even_count && x.size() % 2) throw ConfigError("odd point count (" + std::to_string(x.size()) + ")");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw ConfigError("unsorted boundary points");
    return x;
}

std::string RunConfig::str(const std::string& k, const std::string& def) const {
    auto it = params.find(k);
    return it == params.end() ? def : it->second;
}

double RunConfig::num(const std::string& k) const {
    auto it = params.find(k);
    if (it == params.end()) throw ConfigError("missing --" + k);
    return parse_number(it->second);
}

double RunConfig::num(const std::string& k, double def) const { return has(k) ? num(k) : def; }

long RunConfig::integer(const std::string& k, long def) const {
    if (!has(k)) return def;
    const std::string& s = params.at(k);
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
        throw ConfigError("malformed integer '" + s + "' for --" + k);
    return v;
}

std::vector<double> RunConfig::points(const std::string& k, bool even_count) const {
    if (!has(k)) throw ConfigError("missing --" + k);
    return parse_points(params.at(k), even_count);
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string quote(const std::string& f) {
    if (f.find_first_of(",\"\n") == std::string::npos) return f;
    std::string o = "\"";
    for (char c : f) {
        if (c == '"') o += '"';
        o += c;
    }
    return o + "\"";
}

void emit_row(std::ostringstream& os, const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << quote(r[i]);
    os << "\n";
}

}  // namespace

std::string to_csv(const CsvTable& t) {
    std::ostringstream os;
    emit_row(os, t.header);
    for (const auto& r : t.rows) emit_row(os, r);
    return os.str();
}

CsvTable parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> recs;
    std::vector<std::string> cur;
    std::string field;
    bool inq = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (inq) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    inq = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            inq = true;
        } else if (c == ',') {
            cur.push_back(field);
            field.clear();
        } else if (c == '\n') {
            cur.push_back(field);
            field.clear();
            recs.push_back(cur);
            cur.clear();
            any = false;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (inq) throw ConfigError("csv: unterminated quote");
    if (any) {
        cur.push_back(field);
        recs.push_back(cur);
    }
    CsvTable t;
    if (recs.empty()) return t;
    t.header = recs[0];
    t.rows.assign(recs.begin() + 1, recs.end());
    return t;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ConfigError("write failed for '" + path + "'");
}

nlohmann::json report_json(const std::string& suite, const std::vector<CheckReport>& checks) {
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(fmt_num(v)); };
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name},
                       {"inputs", c.inputs},
                       {"measured", num(c.measured)},
                       {"reference", num(c.reference)},
                       {"tol", num(c.tol)},
                       {"relative", c.relative},
                       {"pass", c.pass}});
    return {{"suite", suite}, {"checks", arr}};
}

int report_exit_code(const std::vector<CheckReport>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return 1;
    return 0;
}

std::string report_table(const std::vector<CheckReport>& checks) {
    std::ostringstream os;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-4s  %-34s  %-14s  %-14s  %-9s  %s\n", "", "check", "measured", "reference",
                  "tol", "inputs");
    os << buf;
    int fails = 0;
    for (const auto& c : checks) {
        fails += c.pass ? 0 : 1;
        std::snprintf(buf, sizeof buf, "%-4s  %-34s  %-14.7g  %-14.7g  %-9.2g%s  %s\n", c.pass ? "ok" : "FAIL",
                      c.name.c_str(), c.measured, c.reference, c.tol, c.relative ? "r" : "a", c.inputs.c_str());
        os << buf;
    }
    os << checks.size() - fails << "/" << checks.size() << " passed\n";
    return os.str();
}

}  // namespace msle::cli
