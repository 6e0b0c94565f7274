#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.h"
#include "pftpha/cli.h"
#include "pftpha/report.h"

namespace pftpha {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "pftpha");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

const std::string kModel = testing::source_path("models/multiprocessor.pft");

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pftpha_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  fs::path dir_;
};

TEST(Cli, ValidateExample) {
  const Result r = run({"validate", kModel});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("valid"), std::string::npos);
}

TEST_F(TempDir, ValidateTwoInputKofn) {
  const std::string path = write(
      "bad.pft",
      "type T1 = {1,2,3}\nbasic B rate 2e-9\nbasic X(i:T1) rate 1e-6\n"
      "basic Y(j:T1) rate 1e-6\n"
      "event SKN = vote(2:3)(forall(i:T1) X(i), forall(j:T1) Y(j))\n"
      "top TE = or(B, SKN)\n");
  const Result r = run({"validate", path});
  EXPECT_EQ(r.code, cli::kInvalid);
  EXPECT_NE(r.out.find("exactly one replicator input"), std::string::npos) << r.out;
  EXPECT_EQ(run({"mcs", path, "-t", "1e4"}).code, cli::kInvalid);
}

TEST_F(TempDir, SyntaxErrorReportsPosition) {
  const std::string path = write("syntax.pft", "basic B rate 1e-6\ntop TE = or(B\n");
  const Result r = run({"validate", path});
  EXPECT_EQ(r.code, cli::kInvalid);
  EXPECT_EQ(r.err.rfind(path + ":2:", 0), 0u) << r.err;
}

TEST(Cli, MissingFile) {
  EXPECT_EQ(run({"validate", "/nonexistent/model.pft"}).code, cli::kIo);
  EXPECT_EQ(run({"mcs", "/nonexistent/model.pft", "-t", "1e4"}).code, cli::kIo);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kInvalid);
  EXPECT_EQ(run({"mcs", kModel}).code, cli::kInvalid);
  EXPECT_EQ(run({"compile", kModel, "--stage", "3", "-t", "1"}).code, cli::kInvalid);
  EXPECT_EQ(run({"mcs", kModel, "-t", "1e4", "--format", "xml"}).code, cli::kInvalid);
  EXPECT_EQ(run({"oracle", kModel, "-t", "1e4", "--tolerance", "-1"}).code, cli::kInvalid);
  EXPECT_EQ(run({"compile", kModel, "--stage", "2", "-t", "1", "--order", "Q=A"}).code,
            cli::kInvalid);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST_F(TempDir, AnalysisFailures) {
  // Cut sets are undefined at time zero; posteriors need a nonzero unreliability.
  EXPECT_EQ(run({"mcs", kModel, "-t", "0"}).code, cli::kAnalysis);
  EXPECT_EQ(run({"posterior", kModel, "-t", "0", "--basic"}).code, cli::kAnalysis);
  // Too many ground basic events for enumeration.
  std::string values;
  for (int i = 1; i <= 30; ++i) values += (i > 1 ? "," : "") + std::to_string(i);
  const std::string big = write(
      "big.pft", "type T = {" + values + "}\nbasic X(i:T) rate 1e-6\n"
                 "top TE = and forall(i:T) X(i)\n");
  EXPECT_EQ(run({"unrel", big, "-t", "1e4"}).code, cli::kOk);
  EXPECT_EQ(run({"oracle", big, "-t", "1e4"}).code, cli::kAnalysis);
}

TEST(Cli, McsMatchesRankedTable) {
  const Result r = run({"mcs", kModel, "-t", "1e4", "--posterior", "--format", "csv"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto rows = read_mcs_csv(r.out);
  ASSERT_EQ(rows.size(), 28u);
  const double disk_prior = 0.091954, disk_post = 0.409541;
  const double pair_prior = 0.001512, pair_post = 0.006736;
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(rows[i].prior, disk_prior, 1e-6);
    EXPECT_NEAR(*rows[i].posterior, disk_post, 1e-6);
  }
  for (int i = 3; i < 9; ++i) {
    EXPECT_NEAR(rows[i].prior, pair_prior, 1e-6) << rows[i].events;
    EXPECT_NEAR(*rows[i].posterior, pair_post, 1e-6) << rows[i].events;
  }
  for (int i = 9; i < 12; ++i) {
    EXPECT_NEAR(rows[i].prior, 0.000025, 1e-6) << rows[i].events;
    EXPECT_NEAR(*rows[i].posterior, 0.000111, 1e-6) << rows[i].events;
  }
  EXPECT_EQ(rows[12].events, "{B}");
  EXPECT_NEAR(rows[12].prior, 0.000020, 1e-6);
  EXPECT_NEAR(*rows[12].posterior, 0.000089, 1e-6);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].rank, i + 1);
}

TEST(Cli, DeterministicOutput) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"mcs", kModel, "-t", "1e4", "--posterior"},
           {"curve", kModel, "--from", "0", "--to", "20000", "--step", "2000"},
           {"posterior", kModel, "-t", "1e4", "--basic", "--format", "csv"},
           {"compile", kModel, "--stage", "2", "-t", "1e4"},
           {"oracle", kModel, "-t", "1e4", "-v"}}) {
    const Result a = run(args), b = run(args);
    EXPECT_EQ(a.code, cli::kOk) << args[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << args[0];
    EXPECT_FALSE(a.out.empty()) << args[0];
  }
}

TEST(Cli, CurveCsv) {
  const Result r = run({"curve", kModel, "--from", "0", "--to", "20000", "--step", "2000"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto points = read_curve_csv(r.out);
  ASSERT_EQ(points.size(), 11u);
  const double expected[] = {0,        0.00154504, 0.0168147, 0.0591537, 0.130736, 0.224528,
                             0.329883, 0.43673,    0.537551,  0.627773,  0.705327};
  for (std::size_t i = 0; i < points.size(); ++i) {
    EXPECT_EQ(points[i].time_hours, 2000.0 * static_cast<double>(i));
    EXPECT_NEAR(points[i].bounds.lower, expected[i], 1e-6 * (1 + expected[i]));
    EXPECT_EQ(points[i].bounds.lower, points[i].bounds.upper);
  }
}

TEST_F(TempDir, CsvRoundTripThroughFiles) {
  const std::string mcs = (dir_ / "mcs.csv").string();
  const std::string post = (dir_ / "post.csv").string();
  ASSERT_EQ(run({"mcs", kModel, "-t", "1e4", "--posterior", "--format", "csv", "--precision",
                 "17", "-o", mcs})
                .code,
            cli::kOk);
  ASSERT_EQ(run({"posterior", kModel, "-t", "1e4", "--basic", "--format", "csv", "-o", post}).code,
            cli::kOk);
  std::stringstream m, p;
  m << std::ifstream(mcs).rdbuf();
  p << std::ifstream(post).rdbuf();

  const auto rows = read_mcs_csv(m.str());
  const auto cut_sets = minimal_cut_sets(testing::multiprocessor(), testing::kMissionTime);
  ASSERT_EQ(rows.size(), cut_sets.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].events, cut_sets[i].render());
    EXPECT_EQ(rows[i].prior, cut_sets[i].prior);
  }
  std::ostringstream again;
  write_mcs_csv(again, rows, 17);
  EXPECT_EQ(again.str(), m.str());

  const auto posts = read_posterior_csv(p.str());
  ASSERT_EQ(posts.size(), 5u);
  EXPECT_EQ(posts[4].event, "D(i,j)");
  EXPECT_NEAR(posts[4].posterior, 0.807458, 1e-6);
  std::ostringstream again_post;
  write_posterior_csv(again_post, posts);
  EXPECT_EQ(again_post.str(), p.str());
}

TEST(Cli, UnwritableOutput) {
  EXPECT_EQ(run({"unrel", kModel, "-t", "1e4", "-o", "/nonexistent/dir/out.csv"}).code, cli::kIo);
}

TEST(Cli, Unreliability) {
  const Result r = run({"unrel", kModel, "-t", "1e4", "--format", "csv"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto points = read_curve_csv(r.out);
  ASSERT_EQ(points.size(), 1u);
  EXPECT_NEAR(points[0].bounds.lower, 0.224528, 1e-6);

  const Result coarse = run({"unrel", kModel, "-t", "1e4", "--epsilon", "0.01", "--format", "csv"});
  ASSERT_EQ(coarse.code, cli::kOk) << coarse.err;
  const auto b = read_curve_csv(coarse.out)[0].bounds;
  EXPECT_LE(b.upper - b.lower, 0.01 + 1e-6);
  EXPECT_LE(b.lower, 0.22452833677008346 + 1e-6);
  EXPECT_GE(b.upper, 0.22452833677008346 - 1e-6);
}

TEST(Cli, CompileStages) {
  const Result s1 = run({"compile", kModel, "--stage", "1", "-t", "1e4"});
  ASSERT_EQ(s1.code, cli::kOk) << s1.err;
  EXPECT_NE(s1.out.find("te :- b(f)"), std::string::npos) << s1.out;
  const Result s2 = run({"compile", kModel, "--stage", "2", "-t", "1e4"});
  ASSERT_EQ(s2.code, cli::kOk) << s2.err;
  EXPECT_NE(s2.out.find("s(I,w) :- "), std::string::npos) << s2.out;
}

TEST(Cli, OracleSummary) {
  const Result r = run({"oracle", kModel, "-t", "1e4"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos) << r.out;
}

}  // namespace
}  // namespace pftpha
