#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oimp/harness.hpp"

using namespace oimp;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("oimp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "oimp");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        return cli_main(static_cast<int>(argv.size()), argv.data());
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunWritesCsv) {
    ASSERT_EQ(run({"run", "--env", "star", "--K", "4", "--N", "10", "--support", "15", "--out", path("a.csv")}), 0);
    std::istringstream in(slurp(path("a.csv")));
    const auto records = parse_csv(in);
    EXPECT_EQ(records.size(), 10u);
}

TEST_F(Cli, UnknownPolicyNamesTheOptions) {
    testing::internal::CaptureStderr();
    const int code = run({"run", "--policy", "eg", "--out", path("x.csv")});
    const std::string err = testing::internal::GetCapturedStderr();
    EXPECT_NE(code, 0);
    EXPECT_NE(err.find("gt-ucb|fat-gt-ucb|random|max-degree|oracle"), std::string::npos);
    EXPECT_FALSE(fs::exists(path("x.csv")));
}

TEST_F(Cli, BadInputsFail) {
    testing::internal::CaptureStderr();
    EXPECT_NE(run({"run", "--env", "moon"}), 0);
    EXPECT_NE(run({"run", "--K", "2", "--L", "3", "--support", "5"}), 0);
    EXPECT_NE(run({"run", "--env", "star", "--star", path("missing.txt")}), 0);
    EXPECT_NE(run({"run", "--env", "star", "--policy", "max-degree", "--support", "5", "--K", "2"}), 0);
    EXPECT_NE(run({}), 0);
    testing::internal::GetCapturedStderr();
}

TEST_F(Cli, ConfigFileWithCommandLinePrecedence) {
    {
        std::ofstream cfg(path("c.conf"));
        cfg << "# campaign\nK=3\nN=7\nsupport=12\npolicy=random\nseed=5\n";
    }
    ASSERT_EQ(run({"run", "--config", path("c.conf"), "--N", "9", "--out", path("a.csv")}), 0);
    std::istringstream in(slurp(path("a.csv")));
    const auto records = parse_csv(in);
    ASSERT_EQ(records.size(), 9u);
    EXPECT_EQ(records[0].policy, "random");
    for (const auto& r : records) EXPECT_LT(r.influencers[0], 3u);
}

TEST_F(Cli, ExtractWritesIds) {
    {
        std::ofstream g(path("g.txt"));
        g << "0 1\n0 2\n0 3\n4 5\n4 6\n";
    }
    ASSERT_EQ(run({"extract", "--graph", path("g.txt"), "--method", "max-degree", "--K", "2", "--out", path("ids.txt")}), 0);
    EXPECT_EQ(slurp(path("ids.txt")), "0\n4\n");
    ASSERT_EQ(run({"extract", "--graph", path("g.txt"), "--method", "max-cover", "--K", "2", "--out", path("c.txt")}), 0);
    EXPECT_EQ(slurp(path("c.txt")), "0\n4\n");
}

TEST_F(Cli, ReplayFromFiles) {
    {
        std::ofstream log(path("log.txt"));
        log << "0;1,2,3\n0;2\n1;7\n1;8,9\n";
    }
    ASSERT_EQ(run({"run", "--env", "replay", "--log", path("log.txt"), "--K", "2", "--N", "6", "--out", path("r.csv")}), 0);
    std::istringstream in(slurp(path("r.csv")));
    EXPECT_EQ(parse_csv(in).size(), 6u);
}

TEST_F(Cli, EverySubcommandIsDeterministic) {
    {
        std::ofstream g(path("g.txt"));
        for (int u = 0; u < 60; ++u) g << u << ' ' << (u * 7 + 3) % 60 << '\n' << u << ' ' << (u * 13 + 1) % 60 << '\n';
    }
    const std::vector<std::vector<std::string>> commands = {
        {"extract", "--graph", path("g.txt"), "--method", "greedy-im", "--K", "3", "--mc-samples", "20"},
        {"run", "--env", "ic", "--graph", path("g.txt"), "--K", "3", "--N", "15", "--runs", "2"},
        {"waiting-time", "--K", "2", "--support", "60", "--runs", "2", "--alpha", "0.5,0.8"},
        {"estimator-study", "--N", "10", "--runs", "3"},
        {"fatigue-study", "--tiers", "30,5", "--N", "20", "--runs", "2"},
    };
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::string outputs[2];
        for (int rep = 0; rep < 2; ++rep) {
            auto args = commands[i];
            const std::string out = path("o" + std::to_string(i) + "_" + std::to_string(rep));
            args.insert(args.end(), {"--seed", "17", "--out", out});
            ASSERT_EQ(run(args), 0) << args[0];
            outputs[rep] = slurp(out);
        }
        EXPECT_FALSE(outputs[0].empty()) << commands[i][0];
        EXPECT_EQ(outputs[0], outputs[1]) << commands[i][0];
    }
}
