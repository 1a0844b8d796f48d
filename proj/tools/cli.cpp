#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cfmmarb/rates.hpp"
#include "cfmmarb/reference.hpp"
#include "cfmmarb/sim.hpp"
#include "cfmmarb/validation.hpp"

namespace cfmmarb::cli {

namespace {

using nlohmann::ordered_json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ordered_json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

void write_csv_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

double only_block_time(const RunConfig& cfg) {
  if (cfg.block_time_s.empty()) return 12.0;
  if (cfg.block_time_s.size() != 1) {
    throw UsageError("this command takes a single --block-time-s");
  }
  return cfg.block_time_s.front();
}

std::vector<double> reference_gammas_bp() {
  std::vector<double> g;
  for (const auto& r : reference::kFrontier) g.push_back(r.gamma_bp);
  return g;
}

// ---------------------------------------------------------------- commands

int cmd_ptrade_table(const RunConfig& cfg, std::ostream& out) {
  std::vector<double> times = cfg.block_time_s;
  if (times.empty()) {
    times.assign(reference::kTradeTableBlockTimes.begin(), reference::kTradeTableBlockTimes.end());
  }
  const std::vector<double> default_bp(reference::kTradeTableFeesBp.begin(),
                                       reference::kTradeTableFeesBp.end());
  const auto fees = resolve_fees(cfg, default_bp);
  std::vector<std::pair<double, double>> quotes;
  if (cfg.buy_fee_bp) {
    quotes.emplace_back(*cfg.buy_fee_bp, *cfg.sell_fee_bp);
  } else {
    for (double g : cfg.gamma_bp.empty() ? default_bp : cfg.gamma_bp) quotes.emplace_back(g, g);
  }

  ordered_json rows = ordered_json::array();
  if (cfg.out == "csv") out << "block_time_s,buy_fee_bp,sell_fee_bp,ptrade,ptrade_pct\n";
  for (double t : times) {
    const auto params = resolve_market(cfg, t);
    for (std::size_t j = 0; j < fees.size(); ++j) {
      double pt = 1.0;
      if (fees[j].gamma_plus > 0.0 || fees[j].gamma_minus > 0.0) {
        pt = law_for(params, fees[j]).p_trade();
      }
      if (cfg.out == "csv") {
        write_csv_line(out, {format_number(t), format_number(quotes[j].first),
                             format_number(quotes[j].second), format_number(pt),
                             format_number(100.0 * pt)});
      } else {
        rows.push_back({{"block_time_s", t},
                        {"buy_fee_bp", quotes[j].first},
                        {"sell_fee_bp", quotes[j].second},
                        {"ptrade", pt},
                        {"ptrade_pct", 100.0 * pt}});
      }
    }
  }
  if (cfg.out == "json") out << rows.dump(2) << '\n';
  return kOk;
}

int cmd_frontier(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.buy_fee_bp) throw UsageError("frontier sweeps symmetric fees; use --gamma-bp");
  const auto params = resolve_market(cfg, only_block_time(cfg));
  const auto fees = resolve_fees(cfg, reference_gammas_bp());
  std::vector<double> gammas;
  for (const auto& f : fees) {
    if (!f.symmetric()) {
      throw UsageError("frontier needs symmetric log fees (drop --compound-fee)");
    }
    gammas.push_back(f.gamma_plus);
  }
  const auto pool = parse_pool(cfg.pool, cfg.level);
  std::vector<FrontierRow> rows;
  try {
    rows = frontier(params, gammas, pool, cfg.price);
  } catch (const UnsupportedConfiguration& e) {
    throw UsageError(e.what());
  }
  std::vector<std::vector<double>> table;
  bool infinite = false;
  for (const auto& r : rows) {
    infinite = infinite || r.infinite;
    table.push_back({r.gamma * 1e4, r.arb * 1e4, r.sigma_z * 1e4, r.p_trade, r.lvr_ptrade * 1e4,
                     r.lvr * 1e4, r.pct_error});
  }
  if (infinite) err << "warning: expected arbitrage profit is infinite for some rows\n";
  if (cfg.out == "csv") {
    write_frontier_csv(out, table);
  } else {
    ordered_json j = ordered_json::array();
    const char* keys[] = {"gamma", "arb", "stdev", "ptr", "lvrptr", "lvr", "pcterror"};
    for (const auto& row : table) {
      ordered_json o;
      for (int k = 0; k < 7; ++k) o[keys[k]] = json_number(row[k]);
      j.push_back(o);
    }
    out << j.dump(2) << '\n';
  }
  return kOk;
}

int cmd_rates(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const double block_time = only_block_time(cfg);
  const auto params = resolve_market(cfg, block_time);
  const auto pool = parse_pool(cfg.pool, cfg.level);
  const auto fees = resolve_fees(cfg, {30.0});
  std::vector<RateReport> computed;
  for (const auto& f : fees) {
    try {
      computed.push_back(rate_report(pool, cfg.price, params, f));
    } catch (const UnsupportedConfiguration& e) {
      throw UsageError(e.what());
    }
  }
  ordered_json reports = ordered_json::array();
  if (cfg.out == "csv") {
    out << "gamma_plus_bp,gamma_minus_bp,pool,price,pool_value,lvr,arb,fee,lvr_normalized,"
           "arb_normalized,fee_normalized,arb_asymptotic,fee_asymptotic,p_trade,sigma_z_bp,method\n";
  }
  for (std::size_t i = 0; i < fees.size(); ++i) {
    const auto& f = fees[i];
    const auto& r = computed[i];
    if (std::isinf(r.arb_rate) || std::isinf(r.fee_rate)) {
      err << "warning: " << (r.diagnostic.empty() ? "rate is infinite" : r.diagnostic) << '\n';
    }
    const std::vector<double> v = {f.gamma_plus * 1e4, f.gamma_minus * 1e4};
    if (cfg.out == "csv") {
      write_csv_line(out, {format_number(v[0]), format_number(v[1]), pool.describe(),
                           format_number(r.price), format_number(r.pool_value),
                           format_number(r.lvr_rate), format_number(r.arb_rate),
                           format_number(r.fee_rate), format_number(r.lvr_rate_normalized * 1e4),
                           format_number(r.arb_rate_normalized * 1e4),
                           format_number(r.fee_rate_normalized * 1e4),
                           format_number(r.arb_asymptotic), format_number(r.fee_asymptotic),
                           format_number(r.p_trade), format_number(r.sigma_z * 1e4),
                           to_string(r.method)});
    } else {
      ordered_json o;
      o["gamma_plus_bp"] = v[0];
      o["gamma_minus_bp"] = v[1];
      o["pool"] = pool.describe();
      o["sigma_daily"] = params.sigma;
      o["block_time_s"] = block_time;
      o["price"] = r.price;
      o["pool_value"] = r.pool_value;
      o["lvr"] = json_number(r.lvr_rate);
      o["arb"] = json_number(r.arb_rate);
      o["fee"] = json_number(r.fee_rate);
      o["lvr_normalized"] = json_number(r.lvr_rate_normalized * 1e4);
      o["arb_normalized"] = json_number(r.arb_rate_normalized * 1e4);
      o["fee_normalized"] = json_number(r.fee_rate_normalized * 1e4);
      o["arb_asymptotic"] = json_number(r.arb_asymptotic);
      o["fee_asymptotic"] = json_number(r.fee_asymptotic);
      o["p_trade"] = r.p_trade;
      o["sigma_z_bp"] = r.sigma_z * 1e4;
      o["method"] = to_string(r.method);
      o["units"] = "numeraire/day; *_normalized in bp/day of pool value";
      if (!r.diagnostic.empty()) o["diagnostic"] = r.diagnostic;
      reports.push_back(o);
    }
  }
  if (cfg.out == "json") out << reports.dump(2) << '\n';
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto params = resolve_market(cfg, only_block_time(cfg));
  const auto pool = parse_pool(cfg.pool, cfg.level);
  const auto fee_list = resolve_fees(cfg, {30.0});
  if (fee_list.size() != 1) throw UsageError("simulate takes a single fee level");
  const auto& fees = fee_list.front();

  if (cfg.paths >= 2) {
    if (!cfg.events_out.empty()) throw UsageError("--events-out needs a single path");
    if (cfg.arrivals > 0) throw UsageError("ensembles run for --horizon-days, not --arrivals");
    const double horizon = cfg.horizon_days > 0.0 ? cfg.horizon_days : 1.0;
    sim::EstimateOptions eo;
    eo.threads = cfg.threads;
    const auto est = sim::estimate_rates(pool, fees, params, cfg.price, cfg.paths, horizon, cfg.seed, eo);
    const std::vector<std::pair<const char*, double>> cells = {
        {"seed", static_cast<double>(cfg.seed)},
        {"paths", static_cast<double>(cfg.paths)},
        {"horizon_days", horizon},
        {"arb_per_day", est.arb.mean},
        {"arb_per_day_se", est.arb.std_error},
        {"fee_per_day", est.fee.mean},
        {"fee_per_day_se", est.fee.std_error},
        {"arb_normalized", est.arb_normalized.mean * 1e4},
        {"arb_normalized_se", est.arb_normalized.std_error * 1e4},
        {"fee_normalized", est.fee_normalized.mean * 1e4},
        {"fee_normalized_se", est.fee_normalized.std_error * 1e4}};
    if (cfg.out == "csv") {
      std::vector<std::string> h, v;
      for (const auto& [k, x] : cells) {
        h.emplace_back(k);
        v.push_back(format_number(x));
      }
      write_csv_line(out, h);
      write_csv_line(out, v);
    } else {
      ordered_json o;
      for (const auto& [k, x] : cells) o[k] = json_number(x);
      out << o.dump(2) << '\n';
    }
    return kOk;
  }

  sim::PathOptions po;
  po.record_events = !cfg.events_out.empty();
  double horizon = cfg.horizon_days > 0.0 ? cfg.horizon_days : kInfiniteRate;
  po.max_arrivals = cfg.arrivals;
  if (cfg.arrivals == 0 && cfg.horizon_days <= 0.0) po.max_arrivals = 1000;
  const auto r = sim::simulate_path(pool, fees, params, cfg.price, 0.0, horizon, cfg.seed, po);

  if (po.record_events) {
    std::ofstream file(cfg.events_out, std::ios::binary);
    if (!file) throw IoError("cannot open " + cfg.events_out + " for writing");
    sim::write_event_log_csv(file, *r.event_log);
    file.flush();
    if (!file) throw IoError("failed writing " + cfg.events_out);
  }
  const double days = r.horizon;
  const auto per_day = [&](double x) { return days > 0.0 ? x / days : 0.0; };
  const std::vector<std::pair<const char*, double>> cells = {
      {"seed", static_cast<double>(cfg.seed)},
      {"n_arrivals", static_cast<double>(r.n_arrivals)},
      {"n_trades", static_cast<double>(r.n_trades)},
      {"horizon_days", days},
      {"arb_total", r.arb_total},
      {"fee_total", r.fee_total},
      {"arb_per_day", per_day(r.arb_total)},
      {"fee_per_day", per_day(r.fee_total)},
      {"arb_normalized", per_day(r.arb_normalized_total) * 1e4},
      {"fee_normalized", per_day(r.fee_normalized_total) * 1e4}};
  if (cfg.out == "csv") {
    std::vector<std::string> h, v;
    for (const auto& [k, x] : cells) {
      h.emplace_back(k);
      v.push_back(format_number(x));
    }
    write_csv_line(out, h);
    write_csv_line(out, v);
  } else {
    ordered_json o;
    for (const auto& [k, x] : cells) o[k] = json_number(x);
    out << o.dump(2) << '\n';
  }
  return kOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!(cfg.tol_sigmas > 0.0)) throw UsageError("--tol-sigmas must be positive");
  validation::Options opt;
  opt.seed = cfg.seed;
  opt.quick = cfg.quick;
  opt.tol_sigmas = cfg.tol_sigmas;
  opt.threads = cfg.threads;
  std::vector<int> which = cfg.criteria;
  if (which.empty()) {
    for (int n = 1; n <= validation::kCriteria; ++n) which.push_back(n);
  }
  for (int n : which) {
    if (n < 1 || n > validation::kCriteria) {
      throw UsageError("--criterion must be between 1 and " + std::to_string(validation::kCriteria));
    }
  }
  bool ok = true;
  ordered_json all = ordered_json::array();
  for (int n : which) {
    const auto checks = validation::run_criterion(n, opt);
    const bool pass = validation::all_passed(checks);
    ok = ok && pass;
    if (cfg.out == "csv") {
      out << (pass ? "PASS" : "FAIL") << " criterion " << n << ": "
          << validation::criterion_title(n) << '\n';
    }
    for (const auto& c : checks) {
      // wall-clock figures go to the diagnostic stream so stdout stays reproducible
      const bool timing = c.name == "runtime_s";
      if (timing) {
        err << validation::format_check(c) << '\n';
        continue;
      }
      if (cfg.out == "csv") {
        out << validation::format_check(c) << '\n';
      } else {
        all.push_back({{"criterion", c.criterion},
                       {"check", c.name},
                       {"statistic", json_number(c.statistic)},
                       {"tolerance", json_number(c.tolerance)},
                       {"passed", c.passed},
                       {"detail", c.detail}});
      }
    }
  }
  if (cfg.out == "json") out << all.dump(2) << '\n';
  err << (ok ? "all checks passed" : "some checks failed") << '\n';
  return ok ? kOk : kValidationFailed;
}

}  // namespace

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

PoolModel parse_pool(const std::string& text, double level) {
  if (text == "cpmm") return PoolModel::constant_product(level);
  if (text.rfind("gmm:", 0) == 0) {
    const std::string w = text.substr(4);
    std::size_t used = 0;
    double weight = std::numeric_limits<double>::quiet_NaN();
    try {
      weight = std::stod(w, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != w.size()) throw UsageError("bad pool weight in '" + text + "'");
    return PoolModel::geometric_mean(level, weight);
  }
  throw UsageError("--pool must be cpmm or gmm:<w>");
}

std::vector<FeeSchedule> resolve_fees(const RunConfig& cfg, const std::vector<double>& default_bp) {
  if (cfg.buy_fee_bp.has_value() != cfg.sell_fee_bp.has_value()) {
    throw UsageError("--buy-fee-bp and --sell-fee-bp go together");
  }
  if (cfg.buy_fee_bp) {
    if (!cfg.gamma_bp.empty()) throw UsageError("use either --gamma-bp or --buy-fee-bp/--sell-fee-bp");
    return {FeeSchedule::from_basis_points(*cfg.buy_fee_bp, *cfg.sell_fee_bp, cfg.compound_fee)};
  }
  const auto& bps = cfg.gamma_bp.empty() ? default_bp : cfg.gamma_bp;
  if (bps.empty()) throw UsageError("empty fee list");
  std::vector<FeeSchedule> out;
  for (double bp : bps) out.push_back(FeeSchedule::from_basis_points(bp, bp, cfg.compound_fee));
  return out;
}

MarketParams resolve_market(const RunConfig& cfg, double block_time_s) {
  if (!(block_time_s > 0.0)) throw UsageError("--block-time-s must be positive");
  if (!(cfg.sigma_daily > 0.0)) throw UsageError("--sigma-daily must be positive");
  const double lambda = kSecondsPerDay / block_time_s;
  if (cfg.mu_daily) return MarketParams::with_drift(*cfg.mu_daily, cfg.sigma_daily, lambda);
  return MarketParams::symmetric(cfg.sigma_daily, lambda);
}

std::vector<std::vector<double>> read_frontier_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kFrontierHeader) {
    throw std::runtime_error("frontier csv: unexpected header");
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::out_of_range&) {
        // subnormal values still parse with strtod
        v = std::strtod(cell.c_str(), nullptr);
        used = cell.size();
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size()) throw std::runtime_error("frontier csv: bad cell '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != 7) throw std::runtime_error("frontier csv: expected 7 columns");
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_frontier_csv(std::ostream& out, const std::vector<std::vector<double>>& rows) {
  out << kFrontierHeader << '\n';
  for (const auto& row : rows) {
    std::vector<std::string> cells;
    for (double v : row) cells.push_back(format_number(v));
    write_csv_line(out, cells);
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arbitrage profit, fee income and mispricing analytics for fee-charging AMMs"};
  app.name("cfmmarb");
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  const CLI::Validator non_empty(
      [](std::string& v) { return v.empty() ? std::string("empty value") : std::string(); }, "");

  RunConfig cfg;
  double mu = std::numeric_limits<double>::quiet_NaN();
  double buy = std::numeric_limits<double>::quiet_NaN();
  double sell = std::numeric_limits<double>::quiet_NaN();

  app.add_option("--sigma-daily", cfg.sigma_daily, "volatility, fraction per sqrt(day)")
      ->capture_default_str();
  app.add_option("--mu-daily", mu, "price drift per day (default sigma^2/2: driftless mispricing)");
  app.add_option("--block-time-s", cfg.block_time_s, "mean block time in seconds (comma list for ptrade-table)")
      ->delimiter(',')
      ->check(non_empty);
  app.add_option("--gamma-bp", cfg.gamma_bp, "symmetric fee levels in basis points (comma list)")
      ->delimiter(',')
      ->check(non_empty);
  app.add_option("--buy-fee-bp", buy, "fee when the arbitrageur buys the risky asset (bp)");
  app.add_option("--sell-fee-bp", sell, "fee when the arbitrageur sells the risky asset (bp)");
  app.add_option("--pool", cfg.pool, "cpmm or gmm:<w>")->capture_default_str();
  app.add_option("--level", cfg.level, "bonding-function level L")->capture_default_str();
  app.add_option("--price", cfg.price, "current (or initial) price")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--paths", cfg.paths, "simulate: number of paths (>= 2 runs an ensemble)");
  app.add_option("--arrivals", cfg.arrivals, "simulate: stop after this many block arrivals");
  app.add_option("--horizon-days", cfg.horizon_days, "simulate: horizon in days");
  app.add_option("--events-out", cfg.events_out, "simulate: write the per-arrival event log CSV here");
  app.add_option("--out", cfg.out, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_flag("--quick", cfg.quick, "validate: reduced samples, 5-sigma tolerances");
  app.add_flag("--compound-fee", cfg.compound_fee,
               "quote fees as exact proportions: gamma+ = ln(1+f), gamma- = -ln(1-f)");
  app.add_option("--tol-sigmas", cfg.tol_sigmas, "validate: Monte Carlo tolerance in standard errors")
      ->capture_default_str();
  app.add_option("--criterion", cfg.criteria, "validate: run only these criteria")->delimiter(',')
      ->check(non_empty);
  app.add_option("--threads", cfg.threads, "worker threads for path ensembles")->capture_default_str();

  auto* ptrade = app.add_subcommand("ptrade-table", "probability of trade over block times x fees");
  auto* front = app.add_subcommand("frontier", "arbitrage rate vs mispricing across fee levels");
  auto* rates = app.add_subcommand("rates", "LVR, arbitrage and fee intensities for one configuration");
  auto* simulate = app.add_subcommand("simulate", "event-driven Monte Carlo paths");
  auto* validate = app.add_subcommand("validate", "run the analytic and Monte Carlo self-checks");
  for (auto* sub : {ptrade, front, rates, simulate, validate}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::FileError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (!std::isnan(mu)) cfg.mu_daily = mu;
  if (!std::isnan(buy)) cfg.buy_fee_bp = buy;
  if (!std::isnan(sell)) cfg.sell_fee_bp = sell;

  try {
    if (*ptrade) return cmd_ptrade_table(cfg, out);
    if (*front) return cmd_frontier(cfg, out, err);
    if (*rates) return cmd_rates(cfg, out, err);
    if (*simulate) return cmd_simulate(cfg, out);
    return cmd_validate(cfg, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::logic_error& e) {
    // domain errors and unsupported configurations
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace cfmmarb::cli
