#pragma once

// Event-driven exact simulation of the pool under Poisson block arrivals.
// Between arrivals the external log price and the mispricing move by the same
// Gaussian increment; at each arrival a myopic arbitrageur trades if the
// mispricing sits outside the no-trade band.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cfmmarb/cfmm.hpp"
#include "cfmmarb/errors.hpp"
#include "cfmmarb/mispricing.hpp"
#include "cfmmarb/random.hpp"
#include "cfmmarb/stats.hpp"

namespace cfmmarb::sim {

struct TradeEvent {
  double tau = 0.0;
  double z_pre = 0.0;
  double z_post = 0.0;
  double arb = 0.0;
  double fee = 0.0;
  double price = 0.0;

  bool operator==(const TradeEvent&) const = default;
};

struct PathResult {
  double horizon = 0.0;
  std::uint64_t n_arrivals = 0;
  std::uint64_t n_trades = 0;
  double arb_total = 0.0;
  double fee_total = 0.0;
  // Sums of A/V and F/V evaluated at the price of each arrival.
  double arb_normalized_total = 0.0;
  double fee_normalized_total = 0.0;
  double final_z = 0.0;
  double final_log_price = 0.0;
  std::optional<std::vector<TradeEvent>> event_log;
  std::optional<std::vector<double>> z_samples;

  bool operator==(const PathResult&) const = default;
};

struct PathOptions {
  std::uint64_t stream_id = 0;
  // Stop after this many arrivals (0: no cap).
  std::uint64_t max_arrivals = 0;
  bool record_events = false;
  // Pre-trade mispricing at every arrival.
  bool record_z = false;
};

namespace detail {

class PathState {
 public:
  PathState(const PoolModel& pool, const FeeSchedule& fees,
            const MarketParams& params, double p0, double z0,
            std::uint64_t seed, std::uint64_t stream_id)
      : pool_(pool),
        fees_(fees),
        params_(params),
        stream_(seed, stream_id),
        z_(z0),
        log_price_(std::log(p0)),
        drift_(params.driftless() ? 0.0 : params.drift_z()) {}

  random::Stream& stream() { return stream_; }
  void set_z(double z) { z_ = z; }
  double z() const { return z_; }
  double log_price() const { return log_price_; }

  // Runs arrivals until the clock would pass `horizon` or the arrival cap is
  // hit. Returns the elapsed time; with a cap, the time of the last arrival.
  double run(double horizon, std::uint64_t max_arrivals, PathResult* out,
             bool record_events, bool record_z) {
    double t = 0.0;
    std::uint64_t n = 0;
    while (max_arrivals == 0 || n < max_arrivals) {
      const double wait = stream_.exponential(params_.lambda);
      if (t + wait > horizon) return horizon;
      t += wait;
      ++n;
      const double inc =
          drift_ * wait + params_.sigma * std::sqrt(wait) * stream_.normal();
      z_ += inc;
      log_price_ += inc;
      const double price = std::exp(log_price_);
      const TradeOutcome trade = myopic_trade(pool_, fees_, price, z_);
      if (out != nullptr) {
        ++out->n_arrivals;
        if (record_z) out->z_samples->push_back(z_);
        if (trade.traded) {
          ++out->n_trades;
          out->arb_total += trade.arb_profit;
          out->fee_total += trade.fee_paid;
          const double value = pool_value(pool_, price);
          out->arb_normalized_total += trade.arb_profit / value;
          out->fee_normalized_total += trade.fee_paid / value;
        }
        if (record_events) {
          out->event_log->push_back(TradeEvent{t, z_, trade.z_post,
                                               trade.arb_profit,
                                               trade.fee_paid, price});
        }
      }
      z_ = trade.z_post;
    }
    return t;
  }

 private:
  PoolModel pool_;
  FeeSchedule fees_;
  MarketParams params_;
  random::Stream stream_;
  double z_;
  double log_price_;
  double drift_;
};

inline void check_inputs(const MarketParams& params, double p0,
                         double horizon) {
  cfmmarb::detail::require_positive(params.lambda, "lambda");
  cfmmarb::detail::require_non_negative(params.sigma, "sigma");
  cfmmarb::detail::require_positive(p0, "P0");
  if (!(horizon >= 0.0)) throw DomainError("horizon must be non-negative");
}

}  // namespace detail

inline PathResult simulate_path(const PoolModel& pool, const FeeSchedule& fees,
                                const MarketParams& params, double p0,
                                double z0, double horizon, std::uint64_t seed,
                                const PathOptions& options = {}) {
  detail::check_inputs(params, p0, horizon);
  if (options.max_arrivals == 0 && !std::isfinite(horizon)) {
    throw DomainError("an infinite horizon needs an arrival cap");
  }
  detail::PathState state(pool, fees, params, p0, z0, seed, options.stream_id);
  PathResult out;
  if (options.record_events) out.event_log.emplace();
  if (options.record_z) out.z_samples.emplace();
  out.horizon = state.run(horizon, options.max_arrivals, &out,
                          options.record_events, options.record_z);
  out.final_z = state.z();
  out.final_log_price = state.log_price();
  return out;
}

inline double default_burn_in(const MarketParams& params,
                              const FeeSchedule& fees) {
  const double gamma = std::max(fees.gamma_plus, fees.gamma_minus);
  const double s2 = params.sigma * params.sigma;
  const double by_fee = s2 > 0.0 ? 50.0 * gamma * gamma / s2 : 0.0;
  return std::max(100.0 / params.lambda, by_fee);
}

enum class StartMode {
  // z0 drawn from the closed-form stationary law; falls back to BurnIn when
  // the band is degenerate.
  Stationary,
  // z0 = 0, then an unrecorded burn-in period.
  BurnIn,
};

struct SimEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_paths = 0;
  std::uint64_t seed = 0;
};

struct RateEstimates {
  // Per day, in units of the numeraire.
  SimEstimate arb;
  SimEstimate fee;
  // Per day, per unit of pool value.
  SimEstimate arb_normalized;
  SimEstimate fee_normalized;
  double horizon = 0.0;
  double burn_in = 0.0;
  StartMode start = StartMode::Stationary;
};

struct EstimateOptions {
  StartMode start = StartMode::Stationary;
  // Negative: default_burn_in.
  double burn_in = -1.0;
  unsigned threads = 1;
};

namespace detail {

struct PathRates {
  double arb = 0.0;
  double fee = 0.0;
  double arb_normalized = 0.0;
  double fee_normalized = 0.0;
};

inline bool has_stationary_law(const FeeSchedule& fees) {
  return fees.gamma_plus > 0.0 && fees.gamma_minus > 0.0;
}

inline PathRates run_rate_path(const PoolModel& pool, const FeeSchedule& fees,
                               const MarketParams& params, double p0,
                               double horizon, std::uint64_t seed,
                               std::uint64_t path, StartMode start,
                               double burn_in,
                               const std::optional<StationaryLaw>& law) {
  PathState state(pool, fees, params, p0, 0.0, seed, path);
  if (start == StartMode::Stationary && law) {
    state.set_z(sample(*law, state.stream()));
  } else if (burn_in > 0.0) {
    state.run(burn_in, 0, nullptr, false, false);
  }
  PathResult r;
  state.run(horizon, 0, &r, false, false);
  return PathRates{r.arb_total / horizon, r.fee_total / horizon,
                   r.arb_normalized_total / horizon,
                   r.fee_normalized_total / horizon};
}

inline SimEstimate summarize(const std::vector<double>& xs,
                             std::uint64_t seed) {
  const auto m = stats::mean_and_error(xs);
  return SimEstimate{m.mean, m.std_error, xs.size(), seed};
}

}  // namespace detail

// Long-run arbitrage and fee intensities from independent paths. Path i uses
// the random stream (seed, i), so results do not depend on `threads`.
inline RateEstimates estimate_rates(const PoolModel& pool,
                                    const FeeSchedule& fees,
                                    const MarketParams& params, double p0,
                                    std::uint64_t n_paths, double horizon,
                                    std::uint64_t seed,
                                    const EstimateOptions& options = {}) {
  detail::check_inputs(params, p0, horizon);
  if (n_paths < 2) throw DomainError("n_paths must be at least 2");
  if (!(horizon > 0.0 && std::isfinite(horizon))) {
    throw DomainError("horizon must be positive and finite");
  }
  RateEstimates out;
  out.horizon = horizon;
  std::optional<StationaryLaw> law;
  if (options.start == StartMode::Stationary && detail::has_stationary_law(fees)) {
    law = law_for(params, fees);
    out.start = StartMode::Stationary;
  } else {
    out.start = StartMode::BurnIn;
    out.burn_in = options.burn_in >= 0.0 ? options.burn_in
                                         : default_burn_in(params, fees);
  }

  std::vector<detail::PathRates> results(n_paths);
  auto work = [&](std::uint64_t first, std::uint64_t step) {
    for (std::uint64_t i = first; i < n_paths; i += step) {
      results[i] = detail::run_rate_path(pool, fees, params, p0, horizon, seed,
                                         i, out.start, out.burn_in, law);
    }
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(options.threads,
                                      static_cast<unsigned>(n_paths)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool_threads;
    for (unsigned t = 0; t < threads; ++t) pool_threads.emplace_back(work, t, threads);
    for (auto& th : pool_threads) th.join();
  }

  std::vector<double> arb(n_paths), fee(n_paths), arb_n(n_paths), fee_n(n_paths);
  for (std::uint64_t i = 0; i < n_paths; ++i) {
    arb[i] = results[i].arb;
    fee[i] = results[i].fee;
    arb_n[i] = results[i].arb_normalized;
    fee_n[i] = results[i].fee_normalized;
  }
  out.arb = detail::summarize(arb, seed);
  out.fee = detail::summarize(fee, seed);
  out.arb_normalized = detail::summarize(arb_n, seed);
  out.fee_normalized = detail::summarize(fee_n, seed);
  return out;
}

struct StationaryEstimate {
  double p_trade_hat = 0.0;
  double sigma_z_hat = 0.0;
  std::vector<double> z_samples;
  // Batch-means error of p_trade_hat (arrivals are serially correlated).
  double p_trade_batch_std_error = 0.0;
  double burn_in = 0.0;
};

// One long path; statistics over the pre-trade mispricing seen by each
// arrival. The path starts from the stationary law when one exists and from
// z = 0 after a burn-in period otherwise.
inline StationaryEstimate estimate_stationary(const PoolModel& pool,
                                              const FeeSchedule& fees,
                                              const MarketParams& params,
                                              std::uint64_t n_arrivals,
                                              std::uint64_t seed,
                                              StartMode start = StartMode::Stationary) {
  if (n_arrivals < 10000) throw DomainError("n_arrivals must be at least 1e4");
  detail::check_inputs(params, 1.0, 0.0);
  detail::PathState state(pool, fees, params, 1.0, 0.0, seed, 0);
  StationaryEstimate out;
  if (start == StartMode::Stationary && detail::has_stationary_law(fees)) {
    state.set_z(sample(law_for(params, fees), state.stream()));
  } else {
    out.burn_in = default_burn_in(params, fees);
    state.run(out.burn_in, 0, nullptr, false, false);
  }
  PathResult r;
  r.z_samples.emplace();
  r.z_samples->reserve(n_arrivals);
  state.run(std::numeric_limits<double>::infinity(), n_arrivals, &r, false, true);
  out.z_samples = std::move(*r.z_samples);

  std::vector<double> outside(out.z_samples.size());
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < out.z_samples.size(); ++i) {
    const double z = out.z_samples[i];
    outside[i] = (z > fees.band_hi() || z < fees.band_lo()) ? 1.0 : 0.0;
    sum_sq += z * z;
  }
  const double n = static_cast<double>(out.z_samples.size());
  out.p_trade_hat = static_cast<double>(r.n_trades) / n;
  out.sigma_z_hat = std::sqrt(sum_sq / n);
  out.p_trade_batch_std_error = stats::batch_means_std_error(outside);
  return out;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline constexpr const char* kEventLogHeader = "tau,z_pre,z_post,arb,fee,price";

inline void write_event_log_csv(std::ostream& os,
                                const std::vector<TradeEvent>& events) {
  os << kEventLogHeader << '\n';
  for (const auto& e : events) {
    os << format_double(e.tau) << ',' << format_double(e.z_pre) << ','
       << format_double(e.z_post) << ',' << format_double(e.arb) << ','
       << format_double(e.fee) << ',' << format_double(e.price) << '\n';
  }
}

inline std::vector<TradeEvent> read_event_log_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kEventLogHeader) {
    throw std::runtime_error("event log: missing or unexpected header");
  }
  std::vector<TradeEvent> events;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    double v[6];
    std::istringstream fields(line);
    std::string cell;
    int k = 0;
    while (std::getline(fields, cell, ',')) {
      if (k == 6) break;
      std::size_t used = 0;
      try {
        v[k] = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size() || cell.empty()) {
        throw std::runtime_error("event log: bad number on row " +
                                 std::to_string(row));
      }
      ++k;
    }
    if (k != 6 || fields.rdbuf()->in_avail() > 0) {
      throw std::runtime_error("event log: expected 6 fields on row " +
                               std::to_string(row));
    }
    events.push_back(TradeEvent{v[0], v[1], v[2], v[3], v[4], v[5]});
  }
  return events;
}

}  // namespace cfmmarb::sim
