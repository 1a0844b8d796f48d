#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cfmmarb/rates.hpp"
#include "cfmmarb/sim.hpp"

using namespace cfmmarb;
using namespace cfmmarb::sim;

namespace {

const double kSigma = 0.05;
const auto kCpmm = PoolModel::constant_product(1.0);
const auto kParams = MarketParams::from_block_time(kSigma, 12.0);

PathOptions with_log(std::uint64_t cap = 0) {
  PathOptions o;
  o.record_events = true;
  o.max_arrivals = cap;
  return o;
}

}  // namespace

TEST(SimulatePath, ZeroArrivals) {
  const auto r = simulate_path(kCpmm, FeeSchedule::symmetric_log(30e-4), kParams, 1.0, 0.0,
                               1e-9, 42, with_log());
  EXPECT_EQ(r.n_arrivals, 0u);
  EXPECT_EQ(r.arb_total, 0.0);
  EXPECT_EQ(r.fee_total, 0.0);
  EXPECT_TRUE(r.event_log->empty());
  EXPECT_EQ(r.final_z, 0.0);
}

TEST(SimulatePath, Deterministic) {
  const auto fees = FeeSchedule::symmetric_log(30e-4);
  const auto a = simulate_path(kCpmm, fees, kParams, 1.0, 0.0, 0.5, 42, with_log());
  const auto b = simulate_path(kCpmm, fees, kParams, 1.0, 0.0, 0.5, 42, with_log());
  EXPECT_GT(a.n_arrivals, 3000u);
  EXPECT_TRUE(a == b);
  const auto c = simulate_path(kCpmm, fees, kParams, 1.0, 0.0, 0.5, 43, with_log());
  EXPECT_FALSE(a == c);
}

TEST(SimulatePath, ZeroFeeTradesAtEveryArrival) {
  const auto r = simulate_path(kCpmm, FeeSchedule::symmetric_log(0.0), kParams, 1.0, 0.0,
                               0.2, 5, with_log());
  EXPECT_GT(r.n_arrivals, 0u);
  EXPECT_EQ(r.n_trades, r.n_arrivals);
  for (const auto& e : *r.event_log) EXPECT_EQ(e.z_post, 0.0);
}

TEST(SimulatePath, TradesEndExactlyOnTheBand) {
  const auto fees = FeeSchedule::asymmetric_log(30e-4, 20e-4);
  const auto r = simulate_path(PoolModel::geometric_mean(1.0, 0.3), fees, kParams, 2.0, 0.0,
                               1.0, 11, with_log());
  std::uint64_t trades = 0;
  for (const auto& e : *r.event_log) {
    if (e.z_pre > fees.gamma_plus) {
      EXPECT_EQ(e.z_post, fees.gamma_plus);
      EXPECT_GT(e.arb, 0.0);
      ++trades;
    } else if (e.z_pre < -fees.gamma_minus) {
      EXPECT_EQ(e.z_post, -fees.gamma_minus);
      EXPECT_GT(e.arb, 0.0);
      ++trades;
    } else {
      EXPECT_EQ(e.z_post, e.z_pre);
      EXPECT_EQ(e.arb, 0.0);
      EXPECT_EQ(e.fee, 0.0);
    }
  }
  EXPECT_EQ(trades, r.n_trades);
  EXPECT_GT(trades, 0u);
}

TEST(SimulatePath, MispricingAndPriceShareIncrements) {
  const auto fees = FeeSchedule::symmetric_log(10e-4);
  const auto r = simulate_path(kCpmm, fees, kParams, 3.0, 0.0, 0.5, 8, with_log());
  const auto& ev = *r.event_log;
  ASSERT_GT(ev.size(), 100u);
  EXPECT_NEAR(ev[0].z_pre, std::log(ev[0].price) - std::log(3.0), 1e-14);
  for (std::size_t i = 1; i < ev.size(); ++i) {
    const double dz = ev[i].z_pre - ev[i - 1].z_post;
    const double dlogp = std::log(ev[i].price) - std::log(ev[i - 1].price);
    EXPECT_NEAR(dz, dlogp, 1e-13);
    EXPECT_GT(ev[i].tau, ev[i - 1].tau);
  }
}

TEST(SimulatePath, NestedHorizonsShareAPrefix) {
  const auto fees = FeeSchedule::symmetric_log(5e-4);
  const auto shorter = simulate_path(kCpmm, fees, kParams, 1.0, 0.0, 0.25, 3, with_log());
  const auto longer = simulate_path(kCpmm, fees, kParams, 1.0, 0.0, 0.5, 3, with_log());
  ASSERT_LE(shorter.event_log->size(), longer.event_log->size());
  for (std::size_t i = 0; i < shorter.event_log->size(); ++i) {
    EXPECT_EQ((*shorter.event_log)[i], (*longer.event_log)[i]);
  }
  EXPECT_LE(shorter.arb_total, longer.arb_total);
  EXPECT_LE(shorter.fee_total, longer.fee_total);
}

TEST(SimulatePath, ArrivalCap) {
  const auto r = simulate_path(kCpmm, FeeSchedule::symmetric_log(30e-4), kParams, 1.0, 0.0,
                               kInfiniteRate, 42, with_log(1000));
  EXPECT_EQ(r.n_arrivals, 1000u);
  EXPECT_EQ(r.horizon, r.event_log->back().tau);
  EXPECT_THROW(simulate_path(kCpmm, FeeSchedule::symmetric_log(30e-4), kParams, 1.0, 0.0,
                             kInfiniteRate, 42),
               DomainError);
  EXPECT_THROW(simulate_path(kCpmm, FeeSchedule::symmetric_log(30e-4), kParams, 0.0, 0.0,
                             1.0, 42),
               DomainError);
}

TEST(SimulatePath, ZeroFeeMatchesFrictionlessLimit) {
  // about 1e6 arrivals in total
  const auto fees = FeeSchedule::symmetric_log(0.0);
  const auto est = estimate_rates(kCpmm, fees, kParams, 1.0, 50, 20000.0 / kParams.lambda, 42);
  const double target = kSigma * kSigma / 8.0 / (1.0 - kSigma * kSigma / (8.0 * kParams.lambda));
  EXPECT_NEAR(est.arb_normalized.mean, target, 3.0 * est.arb_normalized.std_error);
  EXPECT_EQ(est.fee.mean, 0.0);
  EXPECT_EQ(est.start, StartMode::BurnIn);
}

TEST(EstimateRates, AgreesWithAnalyticRates) {
  const auto fees = FeeSchedule::symmetric_log(30e-4);
  const auto est = estimate_rates(kCpmm, fees, kParams, 1.0, 60, 1.0, 42);
  EXPECT_EQ(est.arb_normalized.n_paths, 60u);
  EXPECT_NEAR(est.arb_normalized.mean, arb_rate_cpmm(kParams, fees),
              4.0 * est.arb_normalized.std_error);
  EXPECT_NEAR(est.fee_normalized.mean, fee_rate_cpmm(kParams, fees),
              4.0 * est.fee_normalized.std_error);
  // numeraire totals at P0 = 1 and normalized totals share the pool value scale
  EXPECT_NEAR(est.arb.mean / 2.0, est.arb_normalized.mean, 0.2 * est.arb_normalized.mean);
}

TEST(EstimateRates, StartModesAgree) {
  const auto fees = FeeSchedule::symmetric_log(100e-4);
  EstimateOptions burn;
  burn.start = StartMode::BurnIn;
  const auto a = estimate_rates(kCpmm, fees, kParams, 1.0, 40, 1.0, 9);
  const auto b = estimate_rates(kCpmm, fees, kParams, 1.0, 40, 1.0, 9, burn);
  EXPECT_EQ(b.start, StartMode::BurnIn);
  EXPECT_NEAR(b.burn_in, std::max(100.0 / kParams.lambda, 50.0 * 1e-4 / (kSigma * kSigma)), 1e-15);
  const double se = std::hypot(a.arb_normalized.std_error, b.arb_normalized.std_error);
  EXPECT_NEAR(a.arb_normalized.mean, b.arb_normalized.mean, 4.0 * se);
}

TEST(EstimateRates, ThreadCountDoesNotChangeResults) {
  const auto fees = FeeSchedule::symmetric_log(30e-4);
  EstimateOptions many;
  many.threads = 4;
  const auto a = estimate_rates(kCpmm, fees, kParams, 1.0, 9, 0.1, 42);
  const auto b = estimate_rates(kCpmm, fees, kParams, 1.0, 9, 0.1, 42, many);
  EXPECT_EQ(a.arb.mean, b.arb.mean);
  EXPECT_EQ(a.fee.std_error, b.fee.std_error);
}

TEST(EstimateRates, HugeFeeStopsArbitrage) {
  const auto fees = FeeSchedule::symmetric_log(0.5);
  const auto est = estimate_rates(kCpmm, fees, kParams, 1.0, 10, 1.0, 42);
  EXPECT_LE(std::abs(est.arb.mean), 3.0 * est.arb.std_error + 1e-300);
}

TEST(EstimateRates, StandardErrorScaling) {
  const auto fees = FeeSchedule::symmetric_log(10e-4);
  const auto base = estimate_rates(kCpmm, fees, kParams, 1.0, 64, 0.25, 17);
  // same horizon, twice the paths
  const auto wide = estimate_rates(kCpmm, fees, kParams, 1.0, 128, 0.25, 17);
  EXPECT_NEAR(wide.arb_normalized.std_error / base.arb_normalized.std_error,
              1.0 / std::sqrt(2.0), 0.2 / std::sqrt(2.0));
  // fixed total simulated time: twice the paths, half the horizon
  const auto split = estimate_rates(kCpmm, fees, kParams, 1.0, 128, 0.125, 17);
  EXPECT_NEAR(split.arb_normalized.std_error / base.arb_normalized.std_error, 1.0, 0.2);
  const double se = std::hypot(split.arb_normalized.std_error, base.arb_normalized.std_error);
  EXPECT_NEAR(split.arb_normalized.mean, base.arb_normalized.mean, 4.0 * se);
  EXPECT_THROW(estimate_rates(kCpmm, fees, kParams, 1.0, 1, 0.25, 17), DomainError);
}

TEST(EstimateStationary, MatchesClosedFormLaw) {
  const auto fees = FeeSchedule::symmetric_log(30e-4);
  const auto est = estimate_stationary(kCpmm, fees, kParams, 200000, 42);
  ASSERT_EQ(est.z_samples.size(), 200000u);
  EXPECT_NEAR(est.p_trade_hat, p_trade(kParams, fees), 4.0 * est.p_trade_batch_std_error);
  EXPECT_NEAR(est.sigma_z_hat, mispricing_stdev(kParams, fees),
              0.02 * mispricing_stdev(kParams, fees));
  const auto law = stationary_law(kParams, fees);
  const double d = stats::ks_statistic(est.z_samples, [&](double z) { return cdf(law, z); });
  EXPECT_LT(d, 0.01);
  EXPECT_THROW(estimate_stationary(kCpmm, fees, kParams, 100, 42), DomainError);
}

TEST(EstimateStationary, DriftingMispricing) {
  const auto p = MarketParams::with_drift(0.5 * kSigma * kSigma + 2.0, kSigma, kParams.lambda);
  const auto fees = FeeSchedule::asymmetric_log(20e-4, 40e-4);
  const auto law = nonsymmetric_law(p, fees);
  for (auto start : {StartMode::Stationary, StartMode::BurnIn}) {
    const auto est = estimate_stationary(kCpmm, fees, p, 200000, 5, start);
    const double d = stats::ks_statistic(est.z_samples, [&](double z) { return cdf(law, z); });
    EXPECT_LT(d, 0.01);
    EXPECT_NEAR(est.p_trade_hat, law.p_trade(), 4.0 * est.p_trade_batch_std_error);
  }
}

TEST(EventLog, CsvRoundTripIsByteIdentical) {
  const auto r = simulate_path(kCpmm, FeeSchedule::symmetric_log(30e-4), kParams, 1.0, 0.0,
                               kInfiniteRate, 42, with_log(500));
  std::ostringstream first;
  write_event_log_csv(first, *r.event_log);
  EXPECT_EQ(first.str().substr(0, 31), "tau,z_pre,z_post,arb,fee,price\n");
  std::istringstream in(first.str());
  const auto parsed = read_event_log_csv(in);
  EXPECT_EQ(parsed, *r.event_log);
  std::ostringstream second;
  write_event_log_csv(second, parsed);
  EXPECT_EQ(first.str(), second.str());
}

TEST(EventLog, RejectsMalformedInput) {
  std::istringstream bad_header("tau,z\n1,2\n");
  EXPECT_THROW(read_event_log_csv(bad_header), std::runtime_error);
  std::istringstream bad_row("tau,z_pre,z_post,arb,fee,price\n1,2,3,x,5,6\n");
  EXPECT_THROW(read_event_log_csv(bad_row), std::runtime_error);
  std::istringstream short_row("tau,z_pre,z_post,arb,fee,price\n1,2,3\n");
  EXPECT_THROW(read_event_log_csv(short_row), std::runtime_error);
}
