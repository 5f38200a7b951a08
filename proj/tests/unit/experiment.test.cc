#include "qrc/experiment.h"

#include <filesystem>
#include <fstream>

#include "gtest/gtest.h"

#include "json.hpp"
#include "qrc/errors.h"

using namespace qrc;
using json = nlohmann::json;

namespace {

ExperimentConfig config(Command c) {
    ExperimentConfig cfg;
    cfg.command = c;
    return cfg;
}

size_t count_lines(const std::string &s) {
    return static_cast<size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST(parse_int_range, forms) {
    EXPECT_EQ(parse_int_range("1,2,3"), (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(parse_int_range("0:2"), (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(parse_int_range("1,4:5"), (std::vector<int>{1, 4, 5}));
    EXPECT_TRUE(parse_int_range("").empty());
    EXPECT_TRUE(parse_int_range("3:2").empty());
    EXPECT_THROW(parse_int_range("a"), config_error);
}

TEST(parse_samples, forms) {
    SampleSet s = parse_samples("0:1,1:1");
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(s.str(), "0:1 1:1");
    EXPECT_THROW(parse_samples("01"), config_error);
    EXPECT_THROW(parse_samples("0:1,00:11"), config_error);
}

TEST(run, enumerate_stab1) {
    RunOutput out = run(config(Command::enumerate));
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_EQ(count_lines(out.csv), 25u);
    json s = json::parse(out.summary);
    EXPECT_EQ(s["size"], 24);
    EXPECT_EQ(s["cross_check"]["consistent"], true);
    ASSERT_EQ(out.extras.size(), 1u);
    EXPECT_EQ(json::parse(out.extras[0].content)["size"], 24);
}

TEST(run, robustness_of_t) {
    RunOutput out = run(config(Command::robustness));
    json s = json::parse(out.summary);
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_LE(s["result"]["lambda_star"].get<double>(), 0.7072);
    EXPECT_EQ(s["result"]["status"], "optimal");
}

TEST(run, invalid_k_rejected_before_output) {
    ExperimentConfig cfg = config(Command::check_theorem2);
    cfg.k_values = {-1};
    EXPECT_THROW(run(cfg), config_error);
    cfg.k_values = {1};
    cfg.delta = 1.5;
    EXPECT_THROW(run(cfg), config_error);
}

TEST(run, theorem1_exhaustive) {
    ExperimentConfig cfg = config(Command::check_theorem1);
    cfg.exhaustive = true;
    cfg.m_values = {1, 2};
    RunOutput out = run(cfg);
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_EQ(count_lines(out.csv), 1u + 4u + 16u);
    EXPECT_EQ(json::parse(out.summary)["all_hold"], true);
}

TEST(run, complexity_explicit_samples) {
    ExperimentConfig cfg = config(Command::complexity);
    cfg.samples = "0:0,0:1";
    cfg.class_spec = "stab:1";
    RunOutput out = run(cfg);
    EXPECT_NE(out.csv.find("0:0 0:1"), std::string::npos);
}

TEST(sweep, theorem2_three_rows_nonnegative_slack) {
    ExperimentConfig cfg = config(Command::sweep);
    cfg.k_values = {0, 1, 2};
    cfg.m_values = {4};
    cfg.draws = 5;
    RunOutput out = sweep(cfg);
    EXPECT_EQ(out.exit_code, 0);
    std::istringstream lines(out.csv);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        EXPECT_NE(line.find(",ok,"), std::string::npos) << line;
    }
    EXPECT_EQ(rows, 3);
}

TEST(sweep, empty_range_gives_header_only) {
    ExperimentConfig cfg = config(Command::sweep);
    cfg.k_values = {};
    RunOutput out = sweep(cfg);
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_EQ(count_lines(out.csv), 1u);
}

TEST(sweep, records_cell_failures_and_continues) {
    ExperimentConfig cfg = config(Command::sweep);
    cfg.k_values = {0, 1};
    cfg.m_values = {2, 20};
    cfg.exhaustive = true;
    RunOutput out = sweep(cfg);
    json s = json::parse(out.summary);
    EXPECT_EQ(s["failed_cells"], 2);
    EXPECT_EQ(s["guard_trips"].size(), 2u);
    EXPECT_EQ(count_lines(out.csv), 5u);
}

TEST(sweep, deterministic_bytes) {
    ExperimentConfig cfg = config(Command::sweep);
    cfg.k_values = {0, 1, 2};
    cfg.m_values = {3, 5};
    cfg.draws = 4;
    cfg.sweep_check = "complexity";
    RunOutput a = sweep(cfg);
    RunOutput b = sweep(cfg);
    EXPECT_EQ(a.csv, b.csv);
    EXPECT_EQ(a.summary, b.summary);
    cfg.seed += 1;
    EXPECT_NE(sweep(cfg).csv, a.csv);
}

TEST(config_hash, stable_and_sensitive) {
    ExperimentConfig a = config(Command::sweep);
    ExperimentConfig b = a;
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
    b.depth = 4;
    EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(exit_code_for, mapping) {
    EXPECT_EQ(exit_code_for(config_error("x")), 2);
    EXPECT_EQ(exit_code_for(guard_error("x")), 3);
    EXPECT_EQ(exit_code_for(numerical_error("x")), 4);
}

TEST(resolve_channel, words_and_files) {
    EXPECT_EQ(resolve_channel("H.T", 1).label(), "H.T");
    EXPECT_THROW(resolve_channel("", 1), config_error);

    auto path = std::filesystem::temp_directory_path() / "qrc_resolve_channel_test.json";
    {
        std::ofstream out(path);
        out << serialize_channel(resolve_channel("H.T", 1).with_label("ht"));
    }
    QuantumChannel from_file = resolve_channel(path.string(), 1);
    EXPECT_EQ(from_file.label(), "ht");
    EXPECT_EQ(channel_distance(from_file, resolve_channel("H.T", 1)), 0.0);
    EXPECT_THROW(resolve_channel(path.string(), 2), config_error);
    std::filesystem::remove(path);
}
