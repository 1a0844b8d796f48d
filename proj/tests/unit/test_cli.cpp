#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cfmmarb/reference.hpp"
#include "cfmmarb/sim.hpp"
#include "cli.hpp"

using namespace cfmmarb;
using namespace cfmmarb::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string c; std::getline(in, c, ',');) v.push_back(c);
  return v;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cfmmarb_cli_" + std::to_string(::getpid()) + "_" + name);
}

int binary_exit(const std::string& args) {
  const std::string cmd = std::string(CFMMARB_CLI_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"frontier"}).code, kOk);
  EXPECT_EQ(run({}).code, kUsage);
  EXPECT_EQ(run({"nope"}).code, kUsage);
  EXPECT_EQ(run({"rates", "--out", "xml"}).code, kUsage);
  EXPECT_EQ(run({"rates", "--pool", "gmm:1.5"}).code, kUsage);
  EXPECT_EQ(run({"rates", "--pool", "gmm:"}).code, kUsage);
  EXPECT_EQ(run({"rates", "--buy-fee-bp", "5"}).code, kUsage);
  EXPECT_EQ(run({"rates", "--buy-fee-bp", "5", "--sell-fee-bp", "10"}).code, kUsage);
  EXPECT_EQ(run({"frontier", "--mu-daily", "0.01"}).code, kUsage);
  EXPECT_EQ(run({"frontier", "--gamma-bp", ""}).code, kUsage);
  EXPECT_EQ(run({"frontier", "--gamma-bp", "-3"}).code, kUsage);
  EXPECT_EQ(run({"simulate", "--gamma-bp", "5,10"}).code, kUsage);
  EXPECT_EQ(run({"simulate", "--paths", "4", "--arrivals", "10"}).code, kUsage);
  EXPECT_EQ(run({"validate", "--tol-sigmas", "-1"}).code, kUsage);
  EXPECT_EQ(run({"validate", "--criterion", "9"}).code, kUsage);
  EXPECT_EQ(run({"frontier", "--config", "/nonexistent/cfg.ini"}).code, kIo);
  EXPECT_EQ(run({"--help"}).code, kOk);
}

TEST(Cli, BinaryExitCodes) {
  EXPECT_EQ(binary_exit("frontier --gamma-bp 30"), 0);
  EXPECT_EQ(binary_exit("validate --criterion 2"), 1);
  EXPECT_EQ(binary_exit("frontier --gamma-bp ''"), 2);
  EXPECT_EQ(binary_exit("simulate --events-out /nonexistent/dir/e.csv"), 3);
}

TEST(Cli, FrontierSpotRows) {
  const auto r = run({"frontier", "--gamma-bp", "0.01,30,100"});
  ASSERT_EQ(r.code, kOk);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], kFrontierHeader);
  EXPECT_EQ(split(l[2])[1].substr(0, 8), "0.381098");
  EXPECT_EQ(split(l[2])[3].substr(0, 8), "0.121951");
  EXPECT_EQ(split(l[3])[3], "0.04");
}

TEST(Cli, FrontierDefaultsCoverReferenceGrid) {
  const auto r = run({"frontier"});
  ASSERT_EQ(r.code, kOk);
  std::istringstream in(r.out);
  const auto rows = read_frontier_csv(in);
  ASSERT_EQ(rows.size(), reference::kFrontier.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_DOUBLE_EQ(rows[i][0], reference::kFrontier[i].gamma_bp);
    EXPECT_NEAR(rows[i][1], reference::kFrontier[i].arb, 1e-6 * std::max(1.0, rows[i][1]));
  }
}

TEST(Cli, FrontierCsvRoundTripsByteForByte) {
  const auto r = run({"frontier", "--sigma-daily", "100", "--block-time-s", "86400", "--gamma-bp", "1,30"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.err.find("infinite"), std::string::npos);
  EXPECT_NE(r.out.find("inf"), std::string::npos);
  std::istringstream in(r.out);
  const auto rows = read_frontier_csv(in);
  std::ostringstream again;
  write_frontier_csv(again, rows);
  EXPECT_EQ(again.str(), r.out);

  const auto finite = run({"frontier"});
  std::istringstream in2(finite.out);
  std::ostringstream again2;
  write_frontier_csv(again2, read_frontier_csv(in2));
  EXPECT_EQ(again2.str(), finite.out);
}

TEST(Cli, FrontierCsvRejectsMalformed) {
  std::istringstream bad_header("gamma,arb\n1,2\n");
  EXPECT_THROW(read_frontier_csv(bad_header), std::runtime_error);
  std::istringstream short_row(std::string(kFrontierHeader) + "\n1,2,3\n");
  EXPECT_THROW(read_frontier_csv(short_row), std::runtime_error);
  std::istringstream junk(std::string(kFrontierHeader) + "\n1,2,3,4,5,6,x\n");
  EXPECT_THROW(read_frontier_csv(junk), std::runtime_error);
}

TEST(Cli, OutputsAreDeterministic) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"frontier"},
           {"ptrade-table"},
           {"rates", "--gamma-bp", "5,30", "--out", "json"},
           {"simulate", "--arrivals", "500", "--seed", "7"},
           {"simulate", "--paths", "4", "--horizon-days", "0.1", "--threads", "2"},
           {"validate", "--criterion", "3,6"}}) {
    const auto a = run(args);
    const auto b = run(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
  }
}

TEST(Cli, PtradeTableDefaultsToReferenceGrid) {
  const auto r = run({"ptrade-table"});
  ASSERT_EQ(r.code, kOk);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 26u);
  EXPECT_EQ(l[0], "block_time_s,buy_fee_bp,sell_fee_bp,ptrade,ptrade_pct");
  EXPECT_EQ(split(l[1])[0], "600");
  EXPECT_EQ(split(l[1])[1], "1");
}

TEST(Cli, PtradeTableZeroFeeTradesAlways) {
  const auto r = run({"ptrade-table", "--gamma-bp", "0", "--block-time-s", "12"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(split(lines(r.out)[1])[3], "1");
}

TEST(Cli, SimulateZeroFeeTradesEveryArrival) {
  const auto r = run({"simulate", "--gamma-bp", "0", "--arrivals", "200"});
  ASSERT_EQ(r.code, kOk);
  const auto row = split(lines(r.out)[1]);
  EXPECT_EQ(row[1], "200");
  EXPECT_EQ(row[2], "200");
}

TEST(Cli, SimulateWritesEventLog) {
  const auto path = temp_path("events.csv");
  const auto r = run({"simulate", "--arrivals", "300", "--events-out", path.string()});
  ASSERT_EQ(r.code, kOk);
  std::ifstream in(path, std::ios::binary);
  const auto events = sim::read_event_log_csv(in);
  EXPECT_EQ(events.size(), 300u);
  const auto n_trades = std::stoul(split(lines(r.out)[1])[2]);
  std::size_t traded = 0;
  for (const auto& e : events) traded += e.arb > 0.0;
  EXPECT_EQ(traded, n_trades);
  std::filesystem::remove(path);

  EXPECT_EQ(run({"simulate", "--events-out", "/nonexistent/dir/e.csv"}).code, kIo);
}

TEST(Cli, RatesInfiniteIsReported) {
  const auto r = run({"rates", "--sigma-daily", "100", "--block-time-s", "86400", "--out", "json"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("\"arb\": \"inf\""), std::string::npos);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Cli, GeometricHalfMatchesConstantProduct) {
  const auto c = split(lines(run({"rates", "--gamma-bp", "30"}).out)[1]);
  const auto g = split(lines(run({"rates", "--gamma-bp", "30", "--pool", "gmm:0.5"}).out)[1]);
  ASSERT_EQ(c.size(), g.size());
  for (std::size_t i = 5; i + 1 < c.size(); ++i) {
    EXPECT_NEAR(std::stod(c[i]), std::stod(g[i]), 1e-8 * std::abs(std::stod(c[i]))) << i;
  }
  EXPECT_EQ(c.back(), "closed_form");
  EXPECT_EQ(g.back(), "quadrature");
}

TEST(Cli, CompoundFeeConvention) {
  const auto direct = split(lines(run({"ptrade-table", "--gamma-bp", "30", "--block-time-s", "12"}).out)[1]);
  const auto compound =
      split(lines(run({"ptrade-table", "--gamma-bp", "30", "--block-time-s", "12", "--compound-fee"}).out)[1]);
  EXPECT_EQ(direct[3].substr(0, 8), "0.121951");
  EXPECT_NE(compound[3], direct[3]);
  const auto law = law_for(MarketParams::from_block_time(0.05, 12.0),
                           FeeSchedule::from_basis_points(30.0, 30.0, true));
  EXPECT_NEAR(std::stod(compound[3]), law.p_trade(), 1e-9);

  const auto rates = run({"rates", "--gamma-bp", "30", "--compound-fee"});
  EXPECT_EQ(rates.code, kUsage);
  EXPECT_TRUE(rates.out.empty());
}

TEST(Cli, ConfigFileAndPrecedence) {
  const auto path = temp_path("run.ini");
  {
    std::ofstream f(path);
    f << "gamma-bp=5,30\nsigma-daily=0.1\n";
  }
  const auto from_file = run({"frontier", "--config", path.string()});
  ASSERT_EQ(from_file.code, kOk);
  EXPECT_EQ(lines(from_file.out).size(), 3u);
  EXPECT_EQ(split(lines(from_file.out)[1])[5], "12.5");

  const auto overridden = run({"frontier", "--config", path.string(), "--gamma-bp", "100"});
  ASSERT_EQ(overridden.code, kOk);
  EXPECT_EQ(lines(overridden.out).size(), 2u);
  EXPECT_EQ(split(lines(overridden.out)[1])[0], "100");
  std::filesystem::remove(path);
}

TEST(Cli, ValidateReportsFailureAndKeepsTimingOffStdout) {
  const auto ok = run({"validate", "--criterion", "3"});
  EXPECT_EQ(ok.code, kOk);
  EXPECT_EQ(ok.out.find("runtime"), std::string::npos);
  EXPECT_NE(ok.err.find("runtime"), std::string::npos);
  EXPECT_EQ(lines(ok.out)[0].rfind("PASS criterion 3", 0), 0u);

  const auto bad = run({"validate", "--criterion", "2"});
  EXPECT_EQ(bad.code, kValidationFailed);
  EXPECT_EQ(lines(bad.out)[0].rfind("FAIL criterion 2", 0), 0u);
}
