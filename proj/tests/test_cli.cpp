#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/app.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("exsieve_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(std::vector<std::string> args, const fs::path& sub = {}) {
    args.push_back("--out");
    args.push_back((dir_ / sub).string());
    std::ostringstream out, err;
    const int code = exsieve::cli::run(args, out, err);
    return {code, out.str(), err.str()};
  }

  std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, CountTwinHundred) {
  const auto r = run({"count", "--kind", "twin", "--n", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("100,twin,extended,8,7,18,25,"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "count.csv"));
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "count_manifest.json"));
  EXPECT_EQ(manifest["subcommand"], "count");
  EXPECT_EQ(manifest["outputs"][0]["sha256"], exsieve::report::sha256_hex(slurp(dir_ / "count.csv")));
}

TEST_F(CliTest, CountRangeDeterministicAcrossWorkers) {
  const auto a = run({"count", "--x", "400", "--workers", "1"}, "a");
  const auto b = run({"count", "--x", "400", "--workers", "4"}, "b");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(dir_ / "a" / "count.csv"), slurp(dir_ / "b" / "count.csv"));
}

TEST_F(CliTest, VerifyAxioms) {
  const auto r = run({"verify", "axioms", "--cases", "300", "--seed", "42"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("increment,300,0,true"), std::string::npos) << r.out;
}

TEST_F(CliTest, VerifyIdentities) {
  const auto r = run({"verify", "identities", "--x", "2000"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("closeness,1992,0,true"), std::string::npos) << r.out;
}

TEST_F(CliTest, ScanGoldbachDeterministic) {
  const auto a = run({"scan", "--kind", "goldbach", "--x", "1000000", "--workers", "1"}, "a");
  const auto b = run({"scan", "--kind", "goldbach", "--x", "1000000", "--workers", "4"}, "b");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(dir_ / "a" / "goldbach_exceptional.txt"), "4\n");
  const auto summary = nlohmann::json::parse(slurp(dir_ / "a" / "goldbach_summary.json"));
  EXPECT_EQ(summary["count"], 1);
  EXPECT_EQ(slurp(dir_ / "a" / "goldbach_summary.json"), slurp(dir_ / "b" / "goldbach_summary.json"));
}

TEST_F(CliTest, ScanTwinStrictFileName) {
  const auto r = run({"scan", "--kind", "twin", "--mode", "strict", "--x", "1000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "twin_strict_exceptional.txt"), "4\n");
}

TEST_F(CliTest, SeriesAndDiffAndSieve) {
  EXPECT_EQ(run({"series", "--kind", "twin", "--n", "10000", "--format", "json"}).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "series.json"));
  EXPECT_EQ(run({"diff", "--n1", "400", "--n2", "100"}).code, 0);
  EXPECT_EQ(run({"sieve", "--limit", "100000"}).code, 0);
}

TEST_F(CliTest, DiffMajorantFailureIsReportedNotFatal) {
  const auto r = run({"diff", "--n1", "122", "--n2", "120"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(",false,"), std::string::npos) << r.out;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({"count", "--kind", "quark", "--n", "10"}).code, 2);
  EXPECT_EQ(run({"count", "--n", "11"}).code, 2);
  EXPECT_EQ(run({"scan", "--x", "7"}).code, 2);
  EXPECT_EQ(run({"scan", "--x", "1000", "--limit", "10"}).code, 2);
  EXPECT_EQ(run({"diff", "--n1", "100", "--n2", "400"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}
