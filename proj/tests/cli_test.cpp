#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "itervote/profile_io.hpp"

namespace itervote::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("itervote_cli_" + name);
}

std::string write_temp(const std::string& name, const std::string& text) {
  const fs::path path = temp_file(name);
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

TEST(CliTest, EwNineVoterTie) {
  const Result r = run_cli({"ew", ITERVOTE_TEST_DATA "/nine_voter_tie.txt", "--u", "2,1,0",
                            "--exhaustive"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(contains(r.out, "scores: (3,3,3)"));
  EXPECT_TRUE(contains(r.out, "truthful winner: 1"));
  EXPECT_TRUE(contains(r.out, "potential winners: {1,2,3}"));
  EXPECT_TRUE(contains(r.out, "equilibrium winners: {2,3}"));
  EXPECT_TRUE(contains(r.out, "BR sequences: 5"));
  EXPECT_TRUE(contains(r.out, "D+: -2"));
}

TEST(CliTest, EwSingleAgent) {
  const std::string path = write_temp("single.txt", "1 2 3\n");
  const Result r = run_cli({"ew", path});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(contains(r.out, "equilibrium winners: {1}"));
  EXPECT_TRUE(contains(r.out, "D+: 0"));
}

TEST(CliTest, EwParseErrorNamesLine) {
  const std::string path = write_temp("bad.txt", "1 2 3\n1 1 3\n");
  const Result r = run_cli({"ew", path});
  EXPECT_EQ(r.code, kValidation);
  EXPECT_TRUE(contains(r.err, "line 2"));
}

TEST(CliTest, EwMissingFile) {
  EXPECT_EQ(run_cli({"ew", "/nonexistent/p.txt"}).code, kIo);
}

TEST(CliTest, EwJson) {
  const Result r = run_cli({"ew", ITERVOTE_TEST_DATA "/nine_voter_tie.txt", "--u", "2,1,0",
                            "--format", "json"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_TRUE(contains(r.out, "\"loss\": -2.0"));
}

TEST(CliTest, BudgetOverride) {
  const Result r = run_cli({"--budget", "1", "ew", ITERVOTE_TEST_DATA "/nine_voter_tie.txt",
                            "--exhaustive"});
  EXPECT_EQ(r.code, kBudgetOrInfeasible);

  ::setenv(kBudgetEnv, "1", 1);
  const Result env = run_cli({"ew", ITERVOTE_TEST_DATA "/nine_voter_tie.txt", "--exhaustive"});
  ::unsetenv(kBudgetEnv);
  EXPECT_EQ(env.code, kBudgetOrInfeasible);
}

TEST(CliTest, EadpoaDeterministicAcrossWorkers) {
  const std::string a = temp_file("a.csv").string();
  const std::string b = temp_file("b.csv").string();
  ASSERT_EQ(run_cli({"eadpoa", "--m", "4", "--n", "10:30:10", "--samples", "3000",
                     "--seed", "7", "--workers", "1", "--out", a}).code, kOk);
  ASSERT_EQ(run_cli({"eadpoa", "--m", "4", "--n", "10:30:10", "--samples", "3000",
                     "--seed", "7", "--workers", "8", "--out", b}).code, kOk);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  EXPECT_EQ(text.rfind("n,alpha,count,mean_loss,ci95,probability,budget_failures\n", 0), 0u);
  // Header plus five rows per n.
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 16);
  fs::remove(a);
  fs::remove(b);
}

TEST(CliTest, EadpoaJsonAndSeedRequired) {
  const Result r = run_cli({"eadpoa", "--m", "3", "--n", "5", "--samples", "200",
                            "--seed", "1", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(contains(r.out, "\"alpha\": \"overall\""));
  EXPECT_NE(run_cli({"eadpoa", "--m", "3", "--n", "5"}).code, kOk);
}

TEST(CliTest, ConstructRoundTrip) {
  const std::string path = temp_file("construct.txt").string();
  const Result c = run_cli({"construct", "--m", "3", "--n", "14", "--u", "2,1,0",
                            "--out", path});
  ASSERT_EQ(c.code, kOk) << c.err;
  const Result e = run_cli({"ew", path, "--u", "2,1,0"});
  ASSERT_EQ(e.code, kOk);
  EXPECT_TRUE(contains(e.out, "equilibrium winners: {2}"));
  EXPECT_TRUE(contains(e.out, "D+: 3"));
  fs::remove(path);
}

TEST(CliTest, ConstructInfeasible) {
  const Result r = run_cli({"construct", "--m", "3", "--n", "15"});
  EXPECT_EQ(r.code, kBudgetOrInfeasible);
  EXPECT_FALSE(r.err.empty());
}

TEST(CliTest, Verify) {
  const Result r = run_cli({"verify", "claim1"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(contains(r.out, "PASS claim1"));
  EXPECT_EQ(run_cli({"verify", "stirling", "--umax", "60"}).code, kOk);
  EXPECT_NE(run_cli({"verify", "nonsense"}).code, kOk);
}

TEST(CliTest, ParseHelpers) {
  EXPECT_EQ(parse_n_range("100:400:100"), (std::vector<int>{100, 200, 300, 400}));
  EXPECT_EQ(parse_n_range("5,7"), (std::vector<int>{5, 7}));
  EXPECT_EQ(parse_n_range("10:25:10"), (std::vector<int>{10, 20}));
  EXPECT_THROW(parse_n_range("a"), ValidationError);
  EXPECT_EQ(parse_utility("borda", 4)[1], 3.0);
  EXPECT_EQ(parse_utility("plurality", 4)[2], 0.0);
  EXPECT_EQ(parse_utility("3,1,0", 3)[2], 1.0);
  EXPECT_THROW(parse_utility("3,1", 3), ValidationError);
}

}  // namespace
}  // namespace itervote::cli
