#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "nrc/cli.hpp"

namespace nrc {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(NRC_SAMPLES_DIR) + "/" + name; }

TEST(Cli, NormalizeFlatten) {
  CliRun r = run({"normalize", sample("flatten.nrc")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "for (x <- t) {x.id}\n");
}

TEST(Cli, SqlPrintsOneSelect) {
  CliRun r = run({"sql", sample("flatten_record.nrc")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "SELECT x.id AS id FROM t AS x\n");
}

TEST(Cli, CheckIllTyped) {
  CliRun r = run({"check", sample("illtyped.nrc")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("ERR NotACollection", 0), 0u) << r.err;
}

TEST(Cli, CheckPrintsType) {
  CliRun r = run({"check", sample("flatten.nrc")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("{Int}"), std::string::npos) << r.out;
}

TEST(Cli, EvalWithDatabase) {
  CliRun r = run({"eval", sample("mixed.nrc"), "--db", sample("db.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("id"), std::string::npos) << r.out;
}

TEST(Cli, EraseAndTrace) {
  CliRun e = run({"erase", sample("mixed.nrc")});
  EXPECT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(e.out.find("bagfor"), std::string::npos) << e.out;
  CliRun t = run({"normalize", "--trace", sample("flatten.nrc")});
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("1 comp-"), std::string::npos) << t.out;
}

TEST(Cli, SqlReportsStage) {
  CliRun r = run({"sql", sample("illtyped.nrc")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("check"), std::string::npos) << r.err;
}

TEST(Cli, JsonRecords) {
  CliRun r = run({"--json", "normalize", sample("flatten.nrc")});
  EXPECT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line;
  bool saw = false;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    if (j.value("event", "") == "normal_form") saw = true;
  }
  EXPECT_TRUE(saw) << r.out;
}

TEST(Cli, MetaSuite) {
  CliRun r = run({"meta", "--suite", "measures", "--n", "10", "--seed", "3"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("ok 1"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"normalize"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"meta", "--suite", "nope"}).code, 2);
}

TEST(Cli, MissingFile) { EXPECT_EQ(run({"check", "/nonexistent.nrc"}).code, 1); }

}  // namespace
}  // namespace nrc
