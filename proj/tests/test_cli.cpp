#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mlgcp/instance_io.hpp"
#include "test_support.hpp"

namespace mlgcp {
namespace {

namespace fs = std::filesystem;

struct CliRun {
    int code = -1;
    std::string out;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("mlgcp_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    CliRun run(const std::string& args) const {
        const std::string out_file = path("stdout.txt");
        const std::string cmd = std::string(MLGCP_CLI) + " " + args + " > " + out_file + " 2> " + path("stderr.txt");
        const int status = std::system(cmd.c_str());
        CliRun r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        std::ifstream in(out_file);
        std::stringstream ss;
        ss << in.rdbuf();
        r.out = ss.str();
        return r;
    }

    void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

    static std::string field(const std::string& out, const std::string& key) {
        std::istringstream in(out);
        std::string line;
        while (std::getline(in, line))
            if (line.rfind(key, 0) == 0) {
                const auto pos = line.find_first_not_of(' ', key.size());
                return pos == std::string::npos ? "" : line.substr(pos);
            }
        return "";
    }

    fs::path dir_;
};

TEST_F(Cli, SolveMatchesOracle) {
    ASSERT_EQ(run("generate --n 8 --labels 5 --density 0.5 --scenario random --seed 3 --out " + path("i.elg")).code, 0);
    const LabeledGraph g = read_instance_file(path("i.elg"));
    const double expect = testing::exhaustive_optimum(g);
    const CliRun r = run("solve --model part2 --time-limit 60 --out " + path("i.sol") + " " + path("i.elg"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(field(r.out, "status"), "optimal");
    EXPECT_NEAR(std::stod(field(r.out, "cost")), expect, 1e-9);
    EXPECT_EQ(field(r.out, "gap"), "0.00");
    EXPECT_EQ(run("validate " + path("i.elg") + " " + path("i.sol")).code, 0);
}

TEST_F(Cli, BruteForceSingleEdge) {
    write("e.elg", "2 1 1\n0 1 0\n");
    const CliRun r = run("solve --model bf --out " + path("e.sol") + " " + path("e.elg"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(field(r.out, "cost"), "1");
    EXPECT_EQ(field(r.out, "labels"), "0");
}

TEST_F(Cli, ZeroTimeLimit) {
    write("t.elg", "3 3 3\n0 1 0\n1 2 1\n0 2 2\n");
    const CliRun r = run("solve --model eac --time-limit 0 --out " + path("t.sol") + " " + path("t.elg"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(field(r.out, "status"), "time_limit");
    EXPECT_EQ(field(r.out, "gap"), "100.00");
}

TEST_F(Cli, Errors) {
    write("t.elg", "3 3 3\n0 1 0\n1 2 1\n0 2 2\n");
    EXPECT_NE(run("solve --model nope " + path("t.elg")).code, 0);
    EXPECT_NE(run("solve " + path("missing.elg")).code, 0);
    write("bad.elg", "2 1 1\n0 0 0\n");
    EXPECT_NE(run("solve " + path("bad.elg")).code, 0);
}

TEST_F(Cli, Validate) {
    write("t.elg", "3 3 3\n0 1 0\n1 2 1\n0 2 2\n");
    write("good.sol", "2 2\n0 1\n");
    write("infeasible.sol", "1 1\n0\n");
    write("wrong.sol", "3 2\n0 1\n");
    EXPECT_EQ(run("validate " + path("t.elg") + " " + path("good.sol")).code, 0);
    EXPECT_EQ(run("validate " + path("t.elg") + " " + path("infeasible.sol")).code, 1);
    EXPECT_EQ(run("validate " + path("t.elg") + " " + path("wrong.sol")).code, 2);
}

TEST_F(Cli, BenchBruteForceGroup) {
    const CliRun r = run("bench --n 8 --labels 4 --density 0.5 --instances 2 --model bf --out " + path("b.csv"));
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("n8L4-md"), std::string::npos);
    std::ifstream in(path("b.csv"));
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "group,model,mean_ub,O,t_s,gap,gapr,nodes,cuts");
    std::vector<std::string> cols;
    std::stringstream ss(row);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 9u);
    EXPECT_EQ(cols[0], "n8L4-md");
    EXPECT_EQ(cols[1], "bf");
    EXPECT_EQ(cols[3], "2");
    EXPECT_EQ(cols[5], "0.00");
}

TEST_F(Cli, BenchModelsAgree) {
    ASSERT_EQ(run("bench --n 9 --labels 5 --density 0.5 --instances 10 --model part2,eac --out " + path("b.csv")).code,
              0);
    std::ifstream in(path("b.csv"));
    std::string line;
    std::getline(in, line);
    std::vector<std::string> ubs;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string c;
        for (int k = 0; k < 3; ++k) std::getline(ss, c, ',');
        ubs.push_back(c);
    }
    ASSERT_EQ(ubs.size(), 2u);
    EXPECT_EQ(ubs[0], ubs[1]);
}

}  // namespace
}  // namespace mlgcp
