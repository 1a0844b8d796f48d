#pragma once

// Self-validation harness: analytic values against published tables, quadrature
// against closed forms, Monte Carlo against analytic intensities and the
// generator against the stationary laws. Each numbered group returns one
// CheckResult per individual comparison plus a runtime check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cfmmarb/cfmm.hpp"
#include "cfmmarb/mispricing.hpp"
#include "cfmmarb/random.hpp"
#include "cfmmarb/rates.hpp"
#include "cfmmarb/reference.hpp"
#include "cfmmarb/sim.hpp"
#include "cfmmarb/stats.hpp"

namespace cfmmarb::validation {

struct CheckResult {
  int criterion = 0;
  std::string name;
  double statistic = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 42;
  bool quick = false;
  // Monte Carlo tolerance in standard errors; quick runs widen it to 5.
  double tol_sigmas = 3.0;
  unsigned threads = 1;

  double sigmas() const { return quick ? std::max(tol_sigmas, 5.0) : tol_sigmas; }
};

inline constexpr int kCriteria = 8;

inline const char* criterion_title(int n) {
  switch (n) {
    case 1: return "closed-form frontier table";
    case 2: return "probability-of-trade table";
    case 3: return "quadrature vs constant-product closed form";
    case 4: return "Monte Carlo arbitrage and fee intensities";
    case 5: return "Monte Carlo stationary law";
    case 6: return "generator residuals";
    case 7: return "fast-block asymptotics";
    case 8: return "pool and simulator properties";
    default: return "unknown";
  }
}

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline CheckResult at_most(int c, std::string name, double stat, double tol,
                           std::string detail = {}) {
  return CheckResult{c, std::move(name), stat, tol, stat <= tol, std::move(detail)};
}

inline CheckResult at_least(int c, std::string name, double stat, double tol,
                            std::string detail = {}) {
  return CheckResult{c, std::move(name), stat, tol, stat >= tol, std::move(detail)};
}

// |a - b| measured in half units of the last printed digit of b, for b printed
// with `digits` significant digits. <= 1 means a rounds to b.
inline double printed_digit_error(double a, double b, int digits) {
  const double unit = std::pow(10.0, std::floor(std::log10(std::abs(b))) - (digits - 1));
  return std::abs(a - b) / (0.5 * unit) / (1.0 + 1e-9);
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double simpson_mass(const StationaryLaw& law) {
  auto d = [&](double z) { return density(law, z); };
  return simpson(d, law.band_lo - 60.0 / law.tail_rate_minus, law.band_lo) +
         simpson(d, law.band_lo, law.band_hi) +
         simpson(d, law.band_hi, law.band_hi + 60.0 / law.tail_rate_plus);
}

inline MarketParams frontier_params() {
  return MarketParams::from_block_time(reference::kFrontierSigma,
                                       reference::kFrontierBlockTime);
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline void add_runtime(std::vector<CheckResult>& out, int c, const Timer& t,
                        double budget) {
  out.push_back(at_most(c, "runtime_s", t.seconds(), budget));
}

}  // namespace detail

inline std::vector<CheckResult> criterion_frontier_table(const Options&) {
  using detail::printed_digit_error;
  detail::Timer timer;
  std::vector<CheckResult> out;
  std::vector<double> gammas;
  for (const auto& r : reference::kFrontier) gammas.push_back(r.gamma_bp * 1e-4);
  const auto rows = frontier(detail::frontier_params(), gammas, PoolModel::constant_product(1.0));

  const char* names[] = {"arb", "stdev", "ptr", "lvrptr", "lvr", "pcterror"};
  double worst[6] = {0, 0, 0, 0, 0, 0};
  double worst_gamma[6] = {0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& ref = reference::kFrontier[i];
    const auto& got = rows[i];
    const double ours[6] = {got.arb * 1e4, got.sigma_z * 1e4, got.p_trade,
                            got.lvr_ptrade * 1e4, got.lvr * 1e4, got.pct_error};
    const double theirs[6] = {ref.arb, ref.stdev, ref.ptr, ref.lvrptr, ref.lvr, ref.pcterror};
    for (int k = 0; k < 6; ++k) {
      const double e = printed_digit_error(ours[k], theirs[k], 6);
      if (e > worst[k]) {
        worst[k] = e;
        worst_gamma[k] = ref.gamma_bp;
      }
    }
  }
  for (int k = 0; k < 6; ++k) {
    out.push_back(detail::at_most(
        1, std::string("column_") + names[k] + "_6_digits", worst[k], 1.0,
        std::to_string(rows.size()) + " rows; statistic in half-units of the 6th digit, worst at gamma=" +
            detail::fmt("%g", worst_gamma[k]) + " bp"));
  }

  // Spot rows, compared at the precision they are quoted with.
  const auto spot = frontier(detail::frontier_params(), {30e-4, 100e-4}, PoolModel::constant_product(1.0));
  const double spot_err = std::max(
      {printed_digit_error(spot[0].arb * 1e4, 0.381098, 6),
       printed_digit_error(spot[0].sigma_z * 1e4, 20.1964, 6),
       printed_digit_error(spot[0].p_trade, 0.121951, 6),
       printed_digit_error(spot[0].pct_error, 1.1684e-6, 5),
       printed_digit_error(spot[1].arb * 1e4, 0.125002, 6),
       printed_digit_error(spot[1].sigma_z * 1e4, 60.2887, 6),
       printed_digit_error(spot[1].p_trade, 0.04, 1),
       printed_digit_error(spot[1].pct_error, 1.2543e-5, 5)});
  out.push_back(detail::at_most(1, "spot_rows_30bp_100bp", spot_err, 1.0,
                                "arb=" + detail::fmt("%.6g", spot[0].arb * 1e4) +
                                    " stdev=" + detail::fmt("%.6g", spot[0].sigma_z * 1e4) +
                                    " at 30 bp"));
  detail::add_runtime(out, 1, timer, 1.0);
  return out;
}

inline std::vector<CheckResult> criterion_trade_table(const Options&) {
  detail::Timer timer;
  std::vector<CheckResult> out;
  double worst = 0.0;
  std::string misses;
  int n_miss = 0;
  for (std::size_t i = 0; i < reference::kTradeTableBlockTimes.size(); ++i) {
    const auto p = MarketParams::from_block_time(0.05, reference::kTradeTableBlockTimes[i]);
    for (std::size_t j = 0; j < reference::kTradeTableFeesBp.size(); ++j) {
      const auto fees = FeeSchedule::symmetric_log(reference::kTradeTableFeesBp[j] * 1e-4);
      const double pct = 100.0 * p_trade(p, fees);
      const double gap = std::abs(pct - reference::kTradeTablePercent[i][j]);
      worst = std::max(worst, gap);
      if (gap > 0.1) {
        ++n_miss;
        misses += " dt=" + detail::fmt("%g", reference::kTradeTableBlockTimes[i]) + "s/" +
                  detail::fmt("%g", reference::kTradeTableFeesBp[j]) + "bp:" +
                  detail::fmt("%.3f", pct) + " vs " +
                  detail::fmt("%.1f", reference::kTradeTablePercent[i][j]);
      }
    }
  }
  out.push_back(detail::at_most(2, "all_25_cells_pp", worst, 0.1,
                                n_miss == 0 ? "max gap in percentage points"
                                            : std::to_string(n_miss) + " cells off:" + misses));
  const double spot = 100.0 * p_trade(MarketParams::from_block_time(0.05, 2.0),
                                      FeeSchedule::symmetric_log(5e-4));
  out.push_back(detail::at_most(2, "cell_2s_5bp_pp", std::abs(spot - 25.4), 0.1,
                                detail::fmt("%.4f%%", spot)));
  detail::add_runtime(out, 2, timer, 1.0);
  return out;
}

inline std::vector<CheckResult> criterion_quadrature(const Options&) {
  detail::Timer timer;
  std::vector<CheckResult> out;
  const double sigma = 0.05;
  const double s2 = sigma * sigma;
  const auto pool = PoolModel::geometric_mean(1.0, 0.5);
  const double value = pool_value(pool, 1.0);
  const double lambdas[10] = {4.04 * s2, 0.05, 0.5, 3.0, 24.0, 144.0, 720.0, 7200.0, 43200.0, 1.728e6};
  const double gammas[5] = {0.0, 1e-4, 10e-4, 100e-4, 500e-4};
  double worst = 0.0;
  int n = 0;
  bool fallback = false;
  for (double lambda : lambdas) {
    for (double gamma : gammas) {
      const auto p = MarketParams::symmetric(sigma, lambda);
      const auto fees = FeeSchedule::symmetric_log(gamma);
      const auto q = arb_rate_detailed(pool, 1.0, p, fees);
      fallback = fallback || q.used_fallback;
      const double closed = arb_rate_cpmm(p, fees);
      worst = std::max(worst, std::abs(q.value / value - closed) / closed);
      ++n;
    }
  }
  out.push_back(detail::at_most(3, "max_relative_gap_" + std::to_string(n) + "_pairs", worst, 1e-8,
                                fallback ? "adaptive fallback used" : "Gauss-Laguerre 64/128"));
  detail::add_runtime(out, 3, timer, 5.0);
  return out;
}

inline std::vector<CheckResult> criterion_mc_rates(const Options& opt) {
  detail::Timer timer;
  std::vector<CheckResult> out;
  const auto p = detail::frontier_params();
  const auto fees = FeeSchedule::symmetric_log(30e-4);
  const auto pool = PoolModel::constant_product(1.0);
  const std::uint64_t paths = opt.quick ? 28 : 200;
  const double horizon = opt.quick ? 0.5 : 2.0;
  sim::EstimateOptions eo;
  eo.threads = opt.threads;
  const auto est = sim::estimate_rates(pool, fees, p, 1.0, paths, horizon, opt.seed, eo);
  const double arb = arb_rate_cpmm(p, fees);
  const double fee = fee_rate_cpmm(p, fees);
  const double z_arb = std::abs(est.arb_normalized.mean - arb) / est.arb_normalized.std_error;
  const double z_fee = std::abs(est.fee_normalized.mean - fee) / est.fee_normalized.std_error;
  const std::string setup = std::to_string(paths) + " paths x " + detail::fmt("%g", horizon) +
                            " d, seed " + std::to_string(opt.seed);
  out.push_back(detail::at_most(
      4, "arb_z_score", z_arb, opt.sigmas(),
      "mc " + detail::fmt("%.6f", est.arb_normalized.mean * 1e4) + " +- " +
          detail::fmt("%.6f", est.arb_normalized.std_error * 1e4) + " vs " +
          detail::fmt("%.6f", arb * 1e4) + " bp/day; " + setup));
  out.push_back(detail::at_most(
      4, "fee_z_score", z_fee, opt.sigmas(),
      "mc " + detail::fmt("%.5f", est.fee_normalized.mean * 1e4) + " +- " +
          detail::fmt("%.5f", est.fee_normalized.std_error * 1e4) + " vs " +
          detail::fmt("%.5f", fee * 1e4) + " bp/day"));
  detail::add_runtime(out, 4, timer, 60.0);
  return out;
}

inline std::vector<CheckResult> criterion_mc_stationary(const Options& opt) {
  detail::Timer timer;
  std::vector<CheckResult> out;
  const auto p = detail::frontier_params();
  const auto fees = FeeSchedule::symmetric_log(30e-4);
  const std::uint64_t n = opt.quick ? 100000 : 1000000;
  const auto est = sim::estimate_stationary(PoolModel::constant_product(1.0), fees, p, n, opt.seed);
  const double pt = p_trade(p, fees);
  const double binom = std::sqrt(pt * (1.0 - pt) / static_cast<double>(n));
  out.push_back(detail::at_most(
      5, "p_trade_binomial_z", std::abs(est.p_trade_hat - pt) / binom, opt.sigmas(),
      "hat " + detail::fmt("%.6f", est.p_trade_hat) + " vs " + detail::fmt("%.6f", pt) +
          "; batch-means se " + detail::fmt("%.2e", est.p_trade_batch_std_error) +
          " (binomial " + detail::fmt("%.2e", binom) + ")"));
  const double sd = mispricing_stdev(p, fees);
  const double widen = opt.quick ? std::sqrt(10.0) : 1.0;
  out.push_back(detail::at_most(5, "sigma_z_relative_gap", std::abs(est.sigma_z_hat / sd - 1.0),
                                0.01 * widen,
                                "hat " + detail::fmt("%.4f", est.sigma_z_hat * 1e4) + " vs " +
                                    detail::fmt("%.4f", sd * 1e4) + " bp"));
  const auto law = stationary_law(p, fees);
  const double ks = stats::ks_statistic(est.z_samples, [&](double z) { return cdf(law, z); });
  out.push_back(detail::at_most(5, "ks_statistic", ks, 0.005 * widen,
                                std::to_string(n) + " arrival-epoch samples, seed " +
                                    std::to_string(opt.seed)));
  detail::add_runtime(out, 5, timer, 60.0);
  return out;
}

inline std::vector<CheckResult> criterion_generator(const Options&) {
  detail::Timer timer;
  std::vector<CheckResult> out;
  const double sigma = 0.05;
  const double lambda = kSecondsPerDay / 12.0;
  struct Case {
    std::string label;
    MarketParams params;
    FeeSchedule fees;
  };
  const std::vector<Case> cases = {
      {"symmetric", MarketParams::symmetric(sigma, lambda), FeeSchedule::symmetric_log(30e-4)},
      {"drift_0.01", MarketParams::with_drift(0.5 * sigma * sigma + 0.01, sigma, lambda),
       FeeSchedule::asymmetric_log(30e-4, 20e-4)},
  };
  for (const auto& c : cases) {
    const auto law = law_for(c.params, c.fees);
    const std::vector<TestFunction> fs = {
        test_functions::monomial(1),
        test_functions::monomial(2),
        test_functions::monomial(3),
        test_functions::upper_exponential(0.5 * law.tail_rate_plus, law.band_hi),
        test_functions::lower_exponential(0.5 * law.tail_rate_minus, law.band_lo),
        test_functions::middle_exponential(300.0, law.band_lo, law.band_hi)};
    for (const auto& f : fs) {
      const auto r = generator_residual(law, c.params, f);
      out.push_back(detail::at_most(6, c.label + ":" + f.name, std::abs(r.residual), 1e-7,
                                    "scale " + detail::fmt("%.3e", r.magnitude)));
    }
  }
  detail::add_runtime(out, 6, timer, 5.0);
  return out;
}

inline std::vector<CheckResult> criterion_asymptotics(const Options&) {
  detail::Timer timer;
  std::vector<CheckResult> out;
  const auto pool = PoolModel::constant_product(1.0);
  const double value = pool_value(pool, 1.0);
  const auto p12 = detail::frontier_params();

  // Relative error of the fast-block formula against the exact rate, and of the
  // simpler LVR x P_trade approximation, each against the pcterror column.
  double worst_fast = 0.0, worst_lvr = 0.0, worst_const = 0.0;
  for (const auto& ref : reference::kFrontier) {
    const auto fees = FeeSchedule::symmetric_log(ref.gamma_bp * 1e-4);
    const double exact = arb_rate_cpmm(p12, fees);
    const double fast = arb_rate_asymptotic(pool, 1.0, p12, fees) / value;
    const double lvr_pt = lvr_rate(pool, 1.0, p12.sigma) / value * p_trade(p12, fees);
    const double e_fast = (exact - fast) / exact;
    worst_fast = std::max(worst_fast, std::abs(e_fast - ref.pcterror));
    worst_lvr = std::max(worst_lvr, std::abs((exact - lvr_pt) / exact - ref.pcterror));
    worst_const = std::max(worst_const,
                           std::abs(e_fast - p12.sigma * p12.sigma / (8.0 * p12.lambda)));
  }
  out.push_back(detail::at_most(7, "fast_block_formula_error_vs_pcterror", worst_fast, 1e-9,
                                "max abs gap over the table rows"));
  out.push_back(detail::at_most(7, "lvr_x_ptrade_error_vs_pcterror", worst_lvr, 1e-9,
                                "max abs gap over the table rows"));
  out.push_back(detail::at_most(7, "fast_block_formula_error_is_sigma2_over_8lambda", worst_const,
                                1e-12));

  const auto p2 = MarketParams::from_block_time(0.05, 2.0);
  const auto fees = FeeSchedule::symmetric_log(10e-4);
  const auto r = rate_report(pool, 1.0, p2, fees);
  out.push_back(detail::at_most(7, "lvr_decomposition_10bp_2s",
                                std::abs(r.arb_rate + r.fee_rate - r.lvr_rate) / r.lvr_rate, 1e-3));
  const double base = arb_rate_cpmm(p2, fees);
  for (double m : {4.0, 16.0}) {
    const double scaled = arb_rate_cpmm(MarketParams::symmetric(0.05, m * p2.lambda), fees);
    const double ratio = scaled / base * std::sqrt(m);
    out.push_back(detail::at_most(
        7, "lambda_scaling_x" + detail::fmt("%g", m), std::abs(ratio - 1.0), 0.02,
        "ARB(m lambda) sqrt(m) / ARB(lambda) = " + detail::fmt("%.4f", ratio) +
            ", eta = " + detail::fmt("%.3f", eta(p2, fees))));
  }
  detail::add_runtime(out, 7, timer, 5.0);
  return out;
}

inline std::vector<CheckResult> criterion_properties(const Options& opt) {
  detail::Timer timer;
  std::vector<CheckResult> out;
  const std::vector<PoolModel> pools = {PoolModel::constant_product(1.0),
                                        PoolModel::geometric_mean(1.0, 0.3)};
  double env_v = 0.0, env_y = 0.0, concave = -1e300;
  for (const auto& pool : pools) {
    for (int i = 0; i <= 100; ++i) {
      const double price = 0.1 * std::pow(100.0, i / 100.0);
      const double h = 1e-5 * price;
      const double dv = (pool_value(pool, price + h) - pool_value(pool, price - h)) / (2 * h);
      env_v = std::max(env_v, std::abs(dv / demand_x(pool, price) - 1.0));
      const double dy = (demand_y(pool, price + h) - demand_y(pool, price - h)) / (2 * h);
      const double dx = (demand_x(pool, price + h) - demand_x(pool, price - h)) / (2 * h);
      env_y = std::max(env_y, std::abs(-price * dx / dy - 1.0));
      const double h2 = 1e-3 * price;
      concave = std::max(concave, (pool_value(pool, price + h2) - 2 * pool_value(pool, price) +
                                   pool_value(pool, price - h2)) / (h2 * h2));
    }
  }
  out.push_back(detail::at_most(8, "envelope_dV_equals_x", env_v, 1e-6, "relative, P in [0.1,10]"));
  out.push_back(detail::at_most(8, "envelope_dy_equals_minus_P_dx", env_y, 1e-6));
  out.push_back(detail::at_most(8, "concavity_max_d2V", concave, 1e-9));

  // Myopic trade against every alternative post-trade pool price on a grid.
  random::Stream rng(opt.seed, 1);
  const auto fees = FeeSchedule::asymmetric_log(30e-4, 20e-4);
  double worst_gain = -1e300;
  for (int trial = 0; trial < 20; ++trial) {
    const auto& pool = pools[trial % 2];
    const double price = std::exp(4.0 * rng.uniform() - 2.0);
    double z = 0.0031 + 0.1 * rng.uniform();
    if (trial % 2 == 1) z = -z;
    const double pre = price * std::exp(-z);
    const double best = myopic_trade(pool, fees, price, z).arb_profit;
    for (int k = 0; k <= 1000; ++k) {
      const double post = pre * std::exp(-0.25 + 0.5 * k / 1000.0);
      const double dx = demand_x(pool, pre) - demand_x(pool, post);
      const double dy = demand_y(pool, post) - demand_y(pool, pre);
      const double alt = post >= pre ? price * dx - std::exp(fees.gamma_plus) * dy
                                     : price * dx - std::exp(-fees.gamma_minus) * dy;
      worst_gain = std::max(worst_gain, alt - best);
    }
  }
  out.push_back(detail::at_most(8, "myopic_vs_1000_point_grid", worst_gain, 1e-12,
                                "max profit of any grid alternative over the myopic trade"));

  const double sigma = 0.05, lambda = kSecondsPerDay / 12.0;
  const auto sym = stationary_law(MarketParams::symmetric(sigma, lambda), FeeSchedule::symmetric_log(30e-4));
  const auto non = law_for(MarketParams::with_drift(0.5 * sigma * sigma + 0.01, sigma, lambda),
                           FeeSchedule::asymmetric_log(30e-4, 20e-4));
  out.push_back(detail::at_most(8, "density_normalization", std::max(std::abs(detail::simpson_mass(sym) - 1.0),
                                                                     std::abs(detail::simpson_mass(non) - 1.0)),
                                1e-10, "symmetric and drifting laws, piecewise Simpson"));

  // Same seed, same bytes.
  const auto p = detail::frontier_params();
  sim::PathOptions po;
  po.record_events = true;
  po.max_arrivals = 1000;
  auto dump = [&] {
    const auto r = sim::simulate_path(PoolModel::constant_product(1.0), FeeSchedule::symmetric_log(30e-4), p,
                                      1.0, 0.0, kInfiniteRate, opt.seed, po);
    std::ostringstream os;
    sim::write_event_log_csv(os, *r.event_log);
    return os.str();
  };
  const std::string first = dump();
  const std::string second = dump();
  sim::EstimateOptions one, four;
  four.threads = 4;
  const auto e1 = sim::estimate_rates(PoolModel::constant_product(1.0), FeeSchedule::symmetric_log(30e-4), p, 1.0,
                                      8, 0.05, opt.seed, one);
  const auto e4 = sim::estimate_rates(PoolModel::constant_product(1.0), FeeSchedule::symmetric_log(30e-4), p, 1.0,
                                      8, 0.05, opt.seed, four);
  const bool same = first == second && e1.arb.mean == e4.arb.mean &&
                    e1.arb.std_error == e4.arb.std_error && e1.fee.mean == e4.fee.mean;
  out.push_back(CheckResult{8, "seed_determinism_bytes", same ? 0.0 : 1.0, 0.0, same,
                            std::to_string(first.size()) + " bytes of event log; 1 vs 4 threads"});
  detail::add_runtime(out, 8, timer, 10.0);
  return out;
}

inline std::vector<CheckResult> run_criterion(int n, const Options& opt) {
  switch (n) {
    case 1: return criterion_frontier_table(opt);
    case 2: return criterion_trade_table(opt);
    case 3: return criterion_quadrature(opt);
    case 4: return criterion_mc_rates(opt);
    case 5: return criterion_mc_stationary(opt);
    case 6: return criterion_generator(opt);
    case 7: return criterion_asymptotics(opt);
    case 8: return criterion_properties(opt);
    default: throw std::invalid_argument("criterion must be 1.." + std::to_string(kCriteria));
  }
}

inline bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

inline std::string format_check(const CheckResult& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "  [%s] %d.%s  stat=%.6g  tol=%.6g", c.passed ? "PASS" : "FAIL",
                c.criterion, c.name.c_str(), c.statistic, c.tolerance);
  std::string line = buf;
  if (!c.detail.empty()) line += "  (" + c.detail + ")";
  return line;
}

}  // namespace cfmmarb::validation
