#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = negadrift::cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> result;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        result.push_back(line);
    }
    return result;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("negadrift_test_" + name);
}

const std::vector<std::string> kWorked = {"bound", "sbm", "--n", "500", "--p", "0.002", "--alpha", "2",
                                          "--delta", "0.01", "--a", "0", "--b", "11", "--lambda",
                                          "100", "--L", "1000"};

}  // namespace

TEST(Cli, BoundSbmWorkedExample) {
    const auto r = run(kWorked);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["kind"], "sbm");
    EXPECT_GT(100.0 * j["expected_time_lower"].get<double>(), 1.3e7);
    EXPECT_TRUE(r.err.empty());
}

TEST(Cli, BoundSbmBeyondBTildeExitsTwo) {
    auto args = kWorked;
    args[13] = "12";
    const auto r = run(args);
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
    const auto e = json::parse(r.err);
    EXPECT_EQ(e["error"], "precondition_rejected");
    EXPECT_NE(e["message"].get<std::string>().find("b exceeds b_tilde"), std::string::npos);
}

TEST(Cli, BoundIsPure) {
    EXPECT_EQ(run(kWorked).out, run(kWorked).out);
}

TEST(Cli, EveryBoundKindRuns) {
    const std::vector<std::vector<std::string>> cases = {
        {"bound", "lemma1", "--delta", "0.1", "--Delta", "0.5", "--M", "100", "--L", "10"},
        {"bound", "psm", "--kappa", "1", "--a", "0", "--b", "5", "--alpha", "2", "--delta", "0.1",
         "--D", "0.5", "--lambda", "4", "--L", "10"},
        {"bound", "corollary", "--n", "1000", "--alpha", "1.5", "--a", "3", "--lambda", "5", "--L", "10"},
        {"bound", "mixed", "--n", "2000", "--mutation", "heavy:1.5", "--alpha", "1.2", "--gamma",
         "0.5", "--a", "0", "--b", "10", "--lambda", "10", "--L", "10"},
        {"bound", "simple-ga", "--n", "100000", "--eps", "0.0001", "--a-frac", "0.029", "--mu", "10",
         "--L", "100"},
    };
    for (const auto& args : cases) {
        const auto r = run(args);
        EXPECT_EQ(r.code, 0) << args[1] << ": " << r.err;
        EXPECT_EQ(json::parse(r.out)["kind"], args[1]);
    }
}

TEST(Cli, UnknownFlagIsUsageError) {
    const auto r = run({"bound", "sbm", "--n", "5", "--bogus", "1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.err)["error"], "usage_error");
}

TEST(Cli, MissingParameterIsSchemaViolation) {
    const auto r = run({"bound", "sbm", "--n", "500"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.err)["error"], "schema_violation");
}

TEST(Cli, MalformedNumberIsSchemaViolation) {
    auto args = kWorked;
    args[3] = "five";
    const auto r = run(args);
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.err)["error"], "schema_violation");
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const auto path = temp_file("config.json");
    {
        std::ofstream f(path);
        f << R"({"n": 500, "p": "1/500", "alpha": 2, "delta": 0.01, "a": 0, "b": 12, "lambda": 100, "L": 1000})";
    }
    const auto rejected = run({"bound", "sbm", "--config", path.string()});
    EXPECT_EQ(rejected.code, 2);
    const auto overridden = run({"bound", "sbm", "--config", path.string(), "--b", "11"});
    ASSERT_EQ(overridden.code, 0) << overridden.err;
    EXPECT_EQ(overridden.out, run(kWorked).out);
    std::filesystem::remove(path);
}

TEST(Cli, ConfigRejectsUnknownKeys) {
    const auto path = temp_file("bad_config.json");
    {
        std::ofstream f(path);
        f << R"({"n": 500, "colour": "blue"})";
    }
    const auto r = run({"bound", "sbm", "--config", path.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.err)["error"], "schema_violation");
    std::filesystem::remove(path);
}

TEST(Cli, SweepHasOneRowPerPointIncludingRejections) {
    const auto r = run({"sweep", "sbm", "--n", "500", "--alpha", "2", "--delta", "0.01", "--a", "0",
                        "--lambda", "100", "--L", "1000", "--grid", "b=9,10,11,12",
                        "--grid", "p=0.002,0.004"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 1u + 8u);
    EXPECT_EQ(rows[0].rfind("b,p,status,reason,", 0), 0u);
    int rejected = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].find(",rejected,") != std::string::npos) {
            ++rejected;
            EXPECT_NE(rows[i].find("b exceeds b_tilde"), std::string::npos);
        }
    }
    // p = 0.002 rejects b = 12 only; p = 0.004 has a larger b_tilde.
    EXPECT_EQ(rejected, 1);
    EXPECT_EQ(rows[7].rfind("12,0.002,rejected", 0), 0u);
}

TEST(Cli, SweepRejectsForeignGridKey) {
    const auto r = run({"sweep", "lemma1", "--delta", "0.1", "--Delta", "1", "--M", "100", "--L", "1",
                        "--grid", "n=1,2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.err)["error"], "schema_violation");
}

TEST(Cli, StochasticCommandsNeedASeed) {
    unsetenv("NEGADRIFT_SEED");
    const auto r = run({"simulate", "--n", "10", "--L", "5"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("seed"), std::string::npos);
    setenv("NEGADRIFT_SEED", "17", 1);
    const auto from_env = run({"simulate", "--n", "10", "--L", "5"});
    unsetenv("NEGADRIFT_SEED");
    const auto from_flag = run({"simulate", "--n", "10", "--L", "5", "--seed", "17"});
    ASSERT_EQ(from_env.code, 0);
    EXPECT_EQ(from_env.out, from_flag.out);
}

TEST(Cli, SimulateWritesTrace) {
    const auto r = run({"simulate", "--n", "16", "--mu", "2", "--lambda", "4", "--L", "20", "--seed", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    EXPECT_EQ(rows[0], "t,min_g,log_potential,hit");
    EXPECT_GE(rows.size(), 2u);
    EXPECT_LE(rows.size(), 22u);
}

TEST(Cli, ExperimentWritesSummaryAndRuns) {
    const auto runs = temp_file("runs.csv");
    const auto base = std::vector<std::string>{"experiment", "hitting-time", "--n", "10", "--mu", "2",
                                               "--lambda", "4", "--a", "1", "--L", "100", "--reps",
                                               "30", "--seed", "4", "--runs-output", runs.string()};
    auto one = base;
    one.insert(one.end(), {"--workers", "1"});
    auto eight = base;
    eight.insert(eight.end(), {"--workers", "8"});
    const auto a = run(one);
    ASSERT_EQ(a.code, 0) << a.err;
    std::ifstream f(runs);
    std::stringstream content;
    content << f.rdbuf();
    const auto run_rows = lines(content.str());
    EXPECT_EQ(run_rows.size(), 31u);
    EXPECT_EQ(run_rows[0], "replicate,seed,hitting_time,censored");
    const auto b = run(eight);
    EXPECT_EQ(a.out, b.out);
    const auto rows = lines(a.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].rfind("reps,horizon,", 0), 0u);
    EXPECT_EQ(rows[1].rfind("30,100,", 0), 0u);
    std::filesystem::remove(runs);
}

TEST(Cli, VerifyLemma1OracleIsByteIdentical) {
    const auto a = run({"verify", "lemma1-oracle", "--chains", "200", "--seed", "7"});
    const auto b = run({"verify", "lemma1-oracle", "--chains", "200", "--seed", "7", "--workers", "3"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto rows = lines(a.out);
    ASSERT_EQ(rows.size(), 201u);
    const auto summary = json::parse(rows.back());
    EXPECT_EQ(summary["violations"], 0);
    EXPECT_EQ(summary["chains"], 200);
}

TEST(Cli, VerifyConditions) {
    const auto r = run({"verify", "conditions", "--n", "500", "--p", "0.002", "--alpha", "2",
                        "--delta", "0.01", "--a", "0", "--b", "11"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(json::parse(rows[0])["holds"].get<bool>());
    EXPECT_TRUE(json::parse(rows[1])["holds"].get<bool>());
}

TEST(Cli, VerifyDominationModes) {
    const auto exact = run({"verify", "domination", "--n", "10", "--p", "0.3", "--d1", "6", "--d2", "2"});
    ASSERT_EQ(exact.code, 0) << exact.err;
    EXPECT_TRUE(json::parse(exact.out)["holds"].get<bool>());
    const auto ga = run({"verify", "domination", "--mode", "simple-ga", "--n", "12", "--mu", "4",
                         "--times", "1,3", "--runs", "2000", "--seed", "2"});
    ASSERT_EQ(ga.code, 0) << ga.err;
    EXPECT_EQ(lines(ga.out).size(), 2u);
}

TEST(Cli, VerifyDrift) {
    const auto r = run({"verify", "drift", "--n", "40", "--mu", "2", "--lambda", "4", "--kappa", "1",
                        "--reps", "500", "--seed", "3", "--delta", "0.01", "--D", "0.5", "--b", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.contains("expected_ratio"));
    EXPECT_TRUE(j.contains("holds"));
}

TEST(Cli, SchemaDocumentsColumns) {
    const auto r = run({"schema"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("min_g"), std::string::npos);
    EXPECT_NE(r.out.find("hits_before_horizon"), std::string::npos);
}

TEST(Cli, HelpExitsZero) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("bound"), std::string::npos);
}
