#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "msle/verify.hpp"

namespace msle::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::map<std::string, std::string> params;
    std::optional<std::uint64_t> seed;
    std::string csv_path;   // empty: stdout
    std::string json_path;  // empty: stdout

    bool has(const std::string& k) const { return params.count(k) != 0; }
    std::string str(const std::string& k, const std::string& def = "") const;
    double num(const std::string& k) const;
    double num(const std::string& k, double def) const;
    long integer(const std::string& k, long def) const;
    // comma list, strictly increasing; even_count rejects odd lengths
    std::vector<double> points(const std::string& k, bool even_count = true) const;
};

// keys accepted by each subcommand (config file and flags)
const std::vector<std::string>& allowed_keys(const std::string& command);

// key=value lines; '#' starts a comment; blank lines ignored
std::map<std::string, std::string> read_config_file(const std::string& path);

// file values first, then flags; unknown keys rejected; seed/csv/json lifted out of the map
RunConfig merge_config(const std::string& command, const std::map<std::string, std::string>& file,
                       const std::map<std::string, std::string>& flags);

double parse_number(const std::string& s);
std::vector<double> parse_points(const std::string& s, bool even_count = true);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    bool operator==(const CsvTable&) const = default;
};

std::string fmt_num(double v);  // 17 significant digits
std::string to_csv(const CsvTable& t);
CsvTable parse_csv(const std::string& text);
void write_text(const std::string& path, const std::string& text);  // empty path: stdout

nlohmann::json report_json(const std::string& suite, const std::vector<CheckReport>& checks);
int report_exit_code(const std::vector<CheckReport>& checks);
std::string report_table(const std::vector<CheckReport>& checks);

}  // namespace msle::cli
