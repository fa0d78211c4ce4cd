#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "isingstab/json_io.hpp"

using isingstab::json;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ISINGSTAB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int raw = pclose(p);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("isingstab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::filesystem::path dir_;
};

}  // namespace

TEST_F(CliTest, Table1Csv) {
  const auto r = run("table1");
  ASSERT_EQ(r.status, 0);
  const double reference[] = {0.877, 0.361, 0.810, 0.811, 0.992, 0.998, 0.879, 0.563};
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,epsilon,delta,alpha,c,minimum_removed_size,hypothesis_holds,bound");
  int row = 0;
  while (std::getline(in, line)) {
    const double v = std::stod(line.substr(line.rfind(',') + 1));
    ASSERT_LT(row, 8);
    EXPECT_NEAR(v, reference[row], 0.005) << line;
    ++row;
  }
  EXPECT_EQ(row, 8);
}

TEST_F(CliTest, BoundsAtZeroDelta) {
  const auto r = run("bounds --graph complete --n 4 --delta 0 --eps 0.1");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(json::parse(r.out).at("probability_lower_bound").get<double>(), 1.0);
}

TEST_F(CliTest, GroundThenEnergyAgreeBitExactly) {
  ASSERT_EQ(run("gen --graph kings --n 3 --m 4 --fields --seed 5 --out " + path("inst.json")).status, 0);
  ASSERT_EQ(run("ground --exact --instance " + path("inst.json") + " --out " + path("gs.json")).status, 0);
  const auto e = run("energy --instance " + path("inst.json") + " --config " + path("gs.json"));
  ASSERT_EQ(e.status, 0);
  const double ground = json::parse(slurp(path("gs.json"))).at("energy").get<double>();
  EXPECT_EQ(json::parse(e.out).at("energy").get<double>(), ground);
}

TEST_F(CliTest, SameSeedSameBytes) {
  const auto a = run("gen --graph torus --n 4 --dim 2 --seed 9");
  const auto b = run("gen --graph torus --n 4 --dim 2 --seed 9");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run("gen --graph torus --n 4 --dim 2 --seed 10").out);
  const auto g1 = run("verify gap --graph complete --n 5 --eps 0.2 --delta 0.05 --trials 20 --seed 3");
  const auto g2 = run("verify gap --graph complete --n 5 --eps 0.2 --delta 0.05 --trials 20 --seed 3 --threads 3");
  ASSERT_EQ(g1.status, 0);
  EXPECT_EQ(g1.out, g2.out);
}

TEST_F(CliTest, RandomizedCommandsNeedSeed) {
  EXPECT_EQ(run("gen --graph star --n 4").status, 2);
  EXPECT_EQ(run("verify gap --graph complete --n 4 --eps 0.1 --trials 3").status, 2);
  EXPECT_EQ(run("verify moments --n 10 --delta 0.5 --trials 10").status, 2);
  ASSERT_EQ(run("gen --graph star --n 4 --seed 1 --out " + path("s.json")).status, 0);
  EXPECT_EQ(run("perturb --instance " + path("s.json") + " --delta 0.1").status, 2);
  EXPECT_EQ(run("ground --anneal --instance " + path("s.json")).status, 2);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("bounds --graph complete --n 4 --delta -1 --eps 0.1").status, 2);
  EXPECT_EQ(run("torus-guarantee --n 1e8 --eps 0.05 --delta 0.03").status, 2);
  ASSERT_EQ(run("gen --graph torus --n 30 --seed 1 --out " + path("big.json")).status, 0);
  EXPECT_EQ(run("ground --exact --instance " + path("big.json")).status, 3);
  EXPECT_EQ(run("energy --instance " + path("missing.json") + " --config " + path("missing.json")).status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST_F(CliTest, PerturbRoundTripsThroughOtherCommands) {
  ASSERT_EQ(run("gen --graph complete --n 5 --fields --seed 2 --out " + path("i.json")).status, 0);
  ASSERT_EQ(run("perturb --instance " + path("i.json") + " --bits 4 --out " + path("p.json")).status, 0);
  const auto p = json::parse(slurp(path("p.json")));
  EXPECT_EQ(p.at("delta").get<double>(), 1.0 / 16);
  EXPECT_EQ(run("ground --exact --instance " + path("p.json")).status, 0);
  ASSERT_EQ(run("gen --graph torus --n 10 --seed 2 --out " + path("r.json")).status, 0);
  const auto c = run("compress --instance " + path("r.json") + " --delta 0.5 --exact");
  ASSERT_EQ(c.status, 0);
  const auto cj = json::parse(c.out);
  EXPECT_LE(cj.at("deviation_exact").get<double>(), cj.at("deviation_bound").get<double>());
}

TEST_F(CliTest, OutputDirectoryOverride) {
  const std::string cmd = "ISINGSTAB_OUTPUT_DIR=" + dir_.string() + " " + ISINGSTAB_CLI_PATH +
                          " gen --graph star --n 3 --graph-only --out g.json";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "g.json"));
}

TEST_F(CliTest, CsvSweeps) {
  const auto d = run("bounds --graph kings --n 12 --eps 0.1 --deltas 0,0.001,0.01");
  ASSERT_EQ(d.status, 0);
  EXPECT_EQ(std::count(d.out.begin(), d.out.end(), '\n'), 4);
  const auto s = run("digits --graph complete --sizes 10,100 --eps 0.01");
  ASSERT_EQ(s.status, 0);
  EXPECT_NE(s.out.find("complete_graph"), std::string::npos);
  const auto rh = run("verify rh-scan --sizes 10,20 --trials 2 --seed 1");
  ASSERT_EQ(rh.status, 0);
  EXPECT_EQ(std::count(rh.out.begin(), rh.out.end(), '\n'), 5);
  EXPECT_EQ(run("verify rh-scan --dim 2 --sizes 4 --trials 1 --seed 1").status, 2);
}
