#include "support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tmlcost;
using namespace tmlcost::cli;
using nlohmann::json;
using tmltest::q;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result tmlc(std::vector<std::string> args) {
  args.insert(args.begin(), "tmlc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string path(const std::string& f) { return tmltest::corpus_path(f); }

}  // namespace

TEST(Cli, AnalyzeFibBound) {
  Result r = tmlc({"analyze", path("fib_cap1.tml"), "--args", "n=10", "--capacity", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("fib(e, n) = 0 [n ≤ 1]"), std::string::npos);
  EXPECT_NE(r.out.find("fib(c[e], n) {"), std::string::npos);
  EXPECT_NE(r.out.find("bound: 9\n"), std::string::npos);
}

TEST(Cli, AnalyzeJson) {
  Result r = tmlc({"--json", "analyze", path("fib_cap2.tml"), "--args", "n=10"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["bound"], "9/2");
  EXPECT_EQ(j["equations"].size(), 3u);
}

TEST(Cli, AnalyzeForeignWrapper) {
  Result r = tmlc({"--json", "analyze", path("wrapper_foreign.tml")});
  EXPECT_EQ(r.code, 2);
  json j = json::parse(r.out);
  EXPECT_EQ(j["error"], "RestrictionViolation");
  EXPECT_EQ(j["errors"][0]["method"], "main");
  Result plain = tmlc({"analyze", path("wrapper_foreign.tml")});
  EXPECT_EQ(plain.code, 2);
  EXPECT_NE(plain.err.find("RestrictionViolation"), std::string::npos);
}

TEST(Cli, AnalyzeEmpty) {
  Result r = tmlc({"analyze", path("empty.tml")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("bound: 0\n"), std::string::npos);
}

TEST(Cli, DumpOnlyWhatIsAsked) {
  Result r = tmlc({"analyze", path("wait_timer.tml"), "--dump-equations"});
  EXPECT_EQ(r.out, "wait(e, n) = n/e [true]\nmain() = wait(1, 5) [true]\nbound: 5\n");
}

TEST(Cli, CheckFib) {
  Result r = tmlc({"check", path("fib_cap1.tml"), "--grid", "n=0..8", "--policy", "exhaustive:256"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("verdict: PASS"), std::string::npos);
  EXPECT_NE(r.out.find("PASS  n=8  elapsed 7 <= bound 7"), std::string::npos) << r.out;
}

TEST(Cli, CheckWait) {
  Result r = tmlc({"--json", "check", path("wait_timer.tml")});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "PASS");
  EXPECT_EQ(j["points"][0]["max_elapsed"], "5");
  EXPECT_EQ(j["points"][0]["bound"], "5");
}

TEST(Cli, CheckFooIsInconclusive) {
  Result r = tmlc({"check", path("foo.tml"), "--max-steps", "2000"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("verdict: INCONCLUSIVE"), std::string::npos);
  EXPECT_EQ(r.out.find("verdict: PASS"), std::string::npos);
}

TEST(Cli, CheckReportsAFailure) {
  // wait's real cost is 5; a bound of 1 must be caught
  auto a = analyze_program(tmltest::corpus("wait_timer.tml"));
  a.equations.equations[0].body = costgen::CostExpr::lin(lang::LinExpr(q(1)));
  CheckReport r = check_program(a, {{}}, interp::SchedulerPolicy::fifo(), {});
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_EQ(r.points.at(0).max_elapsed, q(5));
}

TEST(Cli, SimulateTrace) {
  Result r = tmlc({"simulate", path("wait_timer.tml"), "--trace"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  bool saw_tick = false;
  while (std::getline(lines, line) && line.starts_with("{")) {
    json j = json::parse(line);
    if (j["rule"] == "Tick") {
      saw_tick = true;
      EXPECT_EQ(j["t"], "5");
    }
  }
  EXPECT_TRUE(saw_tick);
  EXPECT_NE(r.out.find("elapsed: 5"), std::string::npos);
}

TEST(Cli, SimulateRandomUsesGlobalSeed) {
  Result a = tmlc({"--seed", "4", "--json", "simulate", path("wrapper_with_log.tml"), "--policy", "random"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(json::parse(a.out)["policy"], "random:4");
}

TEST(Cli, SimulateZenoExitCode) {
  Result r = tmlc({"simulate", path("foo.tml"), "--max-steps", "500"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("ZenoSuspected"), std::string::npos);
}

TEST(Cli, EmitCofloco) {
  auto out = std::filesystem::temp_directory_path() / "tmlc_fib_cap2.cofloco";
  Result r = tmlc({"emit-cofloco", path("fib_cap2.tml"), "--capacity", "e=2", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(out.string()), read_file(tmltest::fixture_path("fib_cap2.cofloco")));
  std::filesystem::remove(out);
}

TEST(Cli, EmitCoflocoUnboundDenominator) {
  Result r = tmlc({"--json", "emit-cofloco", path("fib_alt.tml"), "--capacity", "e=1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.out)["error"], "UnboundDenominator");
}

TEST(Cli, Parse) {
  Result r = tmlc({"parse", path("fib_cap1.tml"), "--print"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lang::parse_program(r.out), *tmltest::corpus("fib_cap1.tml"));
}

TEST(Cli, ParseErrorExitCode) {
  auto bad = std::filesystem::temp_directory_path() / "tmlc_bad.tml";
  {
    std::ofstream f(bad);
    f << "{ x = ; } with 1";
  }
  Result r = tmlc({"--json", "parse", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.out)["error"], "ParseError");
  std::filesystem::remove(bad);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(tmlc({}).code, 2);
  EXPECT_EQ(tmlc({"frobnicate"}).code, 2);
  EXPECT_EQ(tmlc({"analyze", "/nonexistent.tml"}).code, 2);
  EXPECT_EQ(tmlc({"check", path("fib_cap1.tml"), "--grid", "n"}).code, 2);
  EXPECT_EQ(tmlc({"--help"}).code, 0);
}

TEST(Harness, Grid) {
  auto g = parse_grid({"n=0..2", "x=1,3"});
  ASSERT_EQ(g.size(), 6u);
  EXPECT_EQ(g[0].at("n"), q(0));
  EXPECT_EQ(g[0].at("x"), q(1));
  EXPECT_EQ(g[5].at("n"), q(2));
  EXPECT_EQ(g[5].at("x"), q(3));
  EXPECT_EQ(parse_grid({}).size(), 1u);
  EXPECT_EQ(parse_grid({"n=1/2"}).at(0).at("n"), q(1, 2));
}

TEST(Harness, Bindings) {
  auto b = parse_bindings({"e=2", "k=3/4"});
  EXPECT_EQ(b.at("e"), q(2));
  EXPECT_EQ(b.at("k"), q(3, 4));
  EXPECT_THROW(parse_bindings({"=2"}), std::invalid_argument);
}
