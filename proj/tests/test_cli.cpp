#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vne/brite.hpp"
#include "vne/cli.hpp"
#include "vne/power_model.hpp"
#include "vne/workload_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "vne");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = vne::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "vne_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, GenSubstrateWritesRequestedSize) {
  auto path = scratch("sub.brite").string();
  auto r = invoke({"gen-substrate", "--nodes", "50", "--links", "250", "--seed", "3", "-o", path});
  ASSERT_EQ(r.code, 0) << r.err;
  auto sn = vne::brite_read(path, vne::PowerConfig::defaults().names());
  EXPECT_EQ(sn.node_count(), 50u);
  EXPECT_EQ(sn.link_count(), 250u);
  for (const auto& l : sn.links()) {
    EXPECT_GE(l.bw_capacity, 50.0);
    EXPECT_LE(l.bw_capacity, 100.0);
  }
}

TEST(Cli, GenWorkloadHonoursCount) {
  auto path = scratch("wl.jsonl").string();
  auto r = invoke({"gen-workload", "--count", "25", "--vn-nodes", "2:4", "--seed", "9", "-o", path});
  ASSERT_EQ(r.code, 0) << r.err;
  auto wl = vne::workload_read(path);
  ASSERT_EQ(wl.size(), 25u);
  for (const auto& v : wl) {
    EXPECT_GE(v.vn.node_count(), 2u);
    EXPECT_LE(v.vn.node_count(), 4u);
  }
}

TEST(Cli, UnknownSolverIsAUsageError) {
  auto sub = scratch("s1.brite").string();
  auto wl = scratch("w1.jsonl").string();
  ASSERT_EQ(invoke({"gen-substrate", "--nodes", "10", "--links", "20", "-o", sub}).code, 0);
  ASSERT_EQ(invoke({"gen-workload", "--count", "3", "-o", wl}).code, 0);
  auto r = invoke({"run", "--substrate", sub, "--workload", wl, "--solver", "nosuch", "-o", scratch("x.csv").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--solver"), std::string::npos) << r.err;
}

TEST(Cli, MissingInputFileIsAUsageError) {
  auto r = invoke({"run", "--substrate", "/nonexistent.brite", "--workload", "/nonexistent.jsonl", "-o",
                   scratch("y.csv").string()});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, BadRangeIsAUsageError) {
  auto r = invoke({"gen-substrate", "--bw", "100:50", "-o", scratch("z.brite").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, MalformedSubstrateIsARuntimeError) {
  auto bad = scratch("bad.brite");
  std::ofstream(bad) << "not a brite file\n";
  auto wl = scratch("w2.jsonl").string();
  ASSERT_EQ(invoke({"gen-workload", "--count", "3", "-o", wl}).code, 0);
  auto r = invoke({"run", "--substrate", bad.string(), "--workload", wl, "-o", scratch("q.csv").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, RunThenReport) {
  auto sub = scratch("s3.brite").string();
  auto wl = scratch("w3.jsonl").string();
  ASSERT_EQ(invoke({"gen-substrate", "--nodes", "15", "--links", "30", "-o", sub}).code, 0);
  ASSERT_EQ(invoke({"gen-workload", "--count", "20", "--vn-nodes", "2:5", "-o", wl}).code, 0);
  std::vector<std::string> summaries;
  for (const char* solver : {"greedy2s", "btbfs"}) {
    auto csv = scratch(std::string(solver) + ".csv").string();
    auto r = invoke({"run", "--substrate", sub, "--workload", wl, "--solver", solver, "-o", csv});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(csv));
    summaries.push_back(csv + ".summary.csv");
  }
  auto combined = scratch("combined.csv").string();
  auto r = invoke({"report", summaries[0], summaries[1], "--csv", combined});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  EXPECT_EQ(header.rfind("solver", 0), 0u);
  EXPECT_EQ(row1.rfind("greedy2s", 0), 0u);
  EXPECT_EQ(row2.rfind("btbfs   ", 0), 0u);
  // Right-aligned numeric columns end together.
  EXPECT_EQ(header.size(), row1.size());
  EXPECT_EQ(row1.size(), row2.size());
  const std::string table = slurp(combined);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 3);
}

TEST(Cli, PowerProfilesFromEnvironment) {
  auto conf = scratch("custom.conf");
  std::ofstream(conf) << "[profile]\nname = Tiny\np_idle_watts = 1\np_max_watts = 2\np_routing_watts = 0.5\n";
  ::setenv("VNE_POWER_PROFILES", conf.string().c_str(), 1);
  auto sub = scratch("tiny.brite").string();
  auto r = invoke({"gen-substrate", "--nodes", "5", "--links", "6", "--node-class", "Tiny:100", "-o", sub});
  ::unsetenv("VNE_POWER_PROFILES");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(sub).find("Tiny"), std::string::npos);

  auto r2 = invoke({"gen-substrate", "--nodes", "5", "--links", "6", "--node-class", "Tiny:100", "-o", sub});
  EXPECT_EQ(r2.code, 1);
}

TEST(Cli, HelpExitsCleanly) {
  auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("gen-substrate"), std::string::npos);
}
