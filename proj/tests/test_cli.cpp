#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "cliutil.hpp"

using namespace msle;
using namespace msle::cli;

TEST(Cli, FlagsOverrideFile) {
    auto rc = merge_config("eval", {{"kappa", "5"}, {"what", "Z"}}, {{"kappa", "6"}});
    EXPECT_EQ(rc.num("kappa"), 6.0);
    EXPECT_EQ(rc.str("what"), "Z");
}

TEST(Cli, UnknownKeyRejected) {
    EXPECT_THROW(merge_config("eval", {{"kapa", "5"}}, {}), ConfigError);
    EXPECT_THROW(merge_config("nope", {}, {}), ConfigError);
}

TEST(Cli, SeedAndPathsLifted) {
    auto rc = merge_config("mc", {{"seed", "17"}, {"csv", "a.csv"}}, {{"json", "b.json"}});
    ASSERT_TRUE(rc.seed.has_value());
    EXPECT_EQ(*rc.seed, 17u);
    EXPECT_EQ(rc.csv_path, "a.csv");
    EXPECT_EQ(rc.json_path, "b.json");
    EXPECT_FALSE(rc.has("seed"));
    EXPECT_THROW(merge_config("mc", {{"seed", "-3"}}, {}), ConfigError);
}

TEST(Cli, PointsParsing) {
    EXPECT_EQ(parse_points("0,1,2,3"), (std::vector<double>{0, 1, 2, 3}));
    EXPECT_EQ(parse_points("0, 1.5e0 ,2,inf").back(), std::numeric_limits<double>::infinity());
    try {
        parse_points("0,2,1,3");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_STREQ(e.what(), "unsorted boundary points");
    }
    EXPECT_THROW(parse_points("0,1,2"), ConfigError);
    EXPECT_NO_THROW(parse_points("0,1,2", false));
    EXPECT_THROW(parse_points("0,1x,2,3"), ConfigError);
    EXPECT_THROW(parse_points("0,,2,3"), ConfigError);
    EXPECT_THROW(parse_points("0,1,2,3,"), ConfigError);
}

TEST(Cli, Numbers) {
    EXPECT_EQ(parse_number("5"), 5.0);
    EXPECT_EQ(parse_number("+2.5"), 2.5);
    EXPECT_THROW(parse_number("5.0.1"), ConfigError);
    EXPECT_THROW(parse_number(""), ConfigError);
    EXPECT_THROW(parse_number("nan"), ConfigError);
}

TEST(Cli, ConfigFile) {
    std::string path = ::testing::TempDir() + "msle_cfg.txt";
    {
        std::ofstream f(path);
        f << "# comment\nkappa = 5\n\nx=0,1,2,3  # trailing\n";
    }
    auto m = read_config_file(path);
    EXPECT_EQ(m.at("kappa"), "5");
    EXPECT_EQ(m.at("x"), "0,1,2,3");
    {
        std::ofstream f(path);
        f << "kappa\n";
    }
    EXPECT_THROW(read_config_file(path), ConfigError);
    std::remove(path.c_str());
}

TEST(Cli, EmptyCsvIsHeaderOnly) {
    CsvTable t;
    t.header = {"a", "b"};
    EXPECT_EQ(to_csv(t), "a,b\n");
    EXPECT_EQ(parse_csv(to_csv(t)), t);
}

TEST(Cli, CsvRoundTrip) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    CsvTable t;
    t.header = {"sample", "value", "label"};
    for (int i = 0; i < 1000; ++i)
        t.rows.push_back({std::to_string(i), fmt_num(std::exp(10 * g(rng)) * g(rng)), i % 7 ? "x" : "a,\"q\""});
    auto back = parse_csv(to_csv(t));
    EXPECT_EQ(back, t);
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        EXPECT_EQ(fmt_num(std::stod(back.rows[i][1])), t.rows[i][1]);
}

TEST(Cli, SeventeenDigits) {
    EXPECT_EQ(fmt_num(0.1), "0.10000000000000001");
    EXPECT_EQ(std::stod(fmt_num(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Cli, ReportExitCodes) {
    std::vector<CheckReport> ok{make_report("a", "", 1.0, 1.0, 1e-9, true)};
    EXPECT_EQ(report_exit_code(ok), 0);
    auto bad = ok;
    bad.push_back(make_report("b", "", 2.0, 1.0, 1e-9, true));
    EXPECT_EQ(report_exit_code(bad), 1);
    EXPECT_EQ(report_exit_code({}), 0);
    auto j = report_json("demo", bad);
    EXPECT_EQ(j["suite"], "demo");
    EXPECT_EQ(j["checks"].size(), 2u);
    EXPECT_EQ(j["checks"][1]["pass"], false);
    EXPECT_TRUE(report_json("empty", {})["checks"].is_array());
}
