#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <ostream>
#include <string>
#include <vector>

#include "cfmmarb/cfmm.hpp"
#include "cfmmarb/mispricing.hpp"

namespace cfmmarb::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kUsage = 2, kIo = 3 };

// Raw inputs in desk units: fraction/day, seconds, basis points.
struct RunConfig {
  double sigma_daily = 0.05;
  std::optional<double> mu_daily;
  std::vector<double> block_time_s;
  std::vector<double> gamma_bp;
  std::optional<double> buy_fee_bp;
  std::optional<double> sell_fee_bp;
  std::string pool = "cpmm";
  double level = 1.0;
  double price = 1.0;
  std::uint64_t seed = 42;
  std::uint64_t paths = 0;
  std::uint64_t arrivals = 0;
  double horizon_days = 0.0;
  std::string out = "csv";
  bool quick = false;
  bool compound_fee = false;
  std::string events_out;
  double tol_sigmas = 3.0;
  std::vector<int> criteria;
  unsigned threads = 1;
};

// Thrown for inputs that parse but make no sense together; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PoolModel parse_pool(const std::string& text, double level);

// Fee schedules for the configured fee quotes; the only place basis points
// become log fees.
std::vector<FeeSchedule> resolve_fees(const RunConfig& cfg,
                                      const std::vector<double>& default_bp);

// The only place block times become arrival rates.
MarketParams resolve_market(const RunConfig& cfg, double block_time_s);

// Frontier CSV: header gamma,arb,stdev,ptr,lvrptr,lvr,pcterror in bp and
// bp/day; every cell is a float (possibly inf or nan).
std::vector<std::vector<double>> read_frontier_csv(std::istream& in);
void write_frontier_csv(std::ostream& out, const std::vector<std::vector<double>>& rows);

inline constexpr const char* kFrontierHeader = "gamma,arb,stdev,ptr,lvrptr,lvr,pcterror";

std::string format_number(double v);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfmmarb::cli
