#include <gtest/gtest.h>

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <vector>

#include "cfmmarb/cfmm.hpp"
#include "cfmmarb/random.hpp"

using namespace cfmmarb;

namespace {

// Minimize P x + y over the curve x^w y^(1-w) = L by a 1-D search in log x.
struct Minimizer {
  double x, y, value;
};

Minimizer minimize_on_curve(double level, double w, double price) {
  auto y_of = [&](double log_x) {
    return std::exp((std::log(level) - w * log_x) / (1.0 - w));
  };
  auto objective = [&](double log_x) { return price * std::exp(log_x) + y_of(log_x); };
  const auto r = boost::math::tools::brent_find_minima(objective, -30.0, 30.0, 60);
  return {std::exp(r.first), y_of(r.first), r.second};
}

// Profit of moving the pool price from pre to post (either direction),
// trading at external price P with the fee charged on the numeraire leg.
double trade_profit(const PoolModel& pool, const FeeSchedule& fees, double price,
                    double pool_pre, double pool_post) {
  const double dx = demand_x(pool, pool_pre) - demand_x(pool, pool_post);
  const double dy = demand_y(pool, pool_post) - demand_y(pool, pool_pre);
  if (pool_post >= pool_pre) {
    // buy risky: receive dx, pay dy plus fee
    return price * dx - std::exp(fees.gamma_plus) * dy;
  }
  // sell risky: give -dx, receive -dy minus fee
  return -std::exp(-fees.gamma_minus) * dy + price * dx;
}

}  // namespace

TEST(Pool, ConstantProductClosedForms) {
  const auto pool = PoolModel::constant_product(1.0);
  EXPECT_DOUBLE_EQ(pool_value(pool, 4.0), 4.0);
  EXPECT_DOUBLE_EQ(pool_value(pool, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(demand_x(pool, 4.0), 0.5);
  EXPECT_DOUBLE_EQ(demand_y(pool, 4.0), 2.0);
  EXPECT_DOUBLE_EQ(demand_x(pool, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(marginal_liquidity(pool, 4.0), 0.25);
  EXPECT_DOUBLE_EQ(marginal_liquidity(pool, 1.0), 0.5);
}

TEST(Pool, RejectsBadInputs) {
  const auto pool = PoolModel::constant_product(1.0);
  EXPECT_THROW(pool_value(pool, 0.0), DomainError);
  EXPECT_THROW(demand_x(pool, -1.0), DomainError);
  EXPECT_THROW(PoolModel::constant_product(0.0), DomainError);
  EXPECT_THROW(PoolModel::geometric_mean(1.0, 1.0), DomainError);
  EXPECT_THROW(PoolModel::geometric_mean(1.0, 0.0), DomainError);
  EXPECT_THROW(FeeSchedule::symmetric_log(-1e-4), DomainError);
}

TEST(Pool, GeometricMeanMatchesNumericMinimizer) {
  for (double w : {0.3, 0.5, 0.8}) {
    for (double price : {0.2, 1.0, 2.0, 7.5}) {
      const auto pool = PoolModel::geometric_mean(1.0, w);
      const auto m = minimize_on_curve(1.0, w, price);
      EXPECT_NEAR(pool_value(pool, price), m.value, 1e-10 * m.value);
      EXPECT_NEAR(demand_x(pool, price), m.x, 1e-6 * m.x);
      EXPECT_NEAR(demand_y(pool, price), m.y, 1e-6 * m.y);
      EXPECT_NEAR(price * demand_x(pool, price) + demand_y(pool, price),
                  pool_value(pool, price), 1e-13 * m.value);
      const double lhs = std::pow(demand_x(pool, price), w) *
                         std::pow(demand_y(pool, price), 1.0 - w);
      EXPECT_NEAR(lhs, 1.0, 1e-13);
    }
  }
}

TEST(Pool, HalfWeightIsConstantProduct) {
  const auto cp = PoolModel::constant_product(1.3);
  const auto gm = PoolModel::geometric_mean(1.3, 0.5);
  for (double price : {0.1, 1.0, 3.0}) {
    EXPECT_NEAR(pool_value(cp, price), pool_value(gm, price), 1e-14 * pool_value(cp, price));
    EXPECT_NEAR(demand_x(cp, price), demand_x(gm, price), 1e-14 * demand_x(cp, price));
  }
}

TEST(Pool, EnvelopeIdentitiesByFiniteDifferences) {
  for (const auto& pool : {PoolModel::constant_product(1.0),
                           PoolModel::geometric_mean(2.0, 0.3),
                           PoolModel::geometric_mean(0.5, 0.75)}) {
    for (int i = 0; i <= 40; ++i) {
      const double price = 0.1 * std::pow(100.0, i / 40.0);
      const double h = 1e-5 * price;
      const double dv = (pool_value(pool, price + h) - pool_value(pool, price - h)) / (2 * h);
      EXPECT_NEAR(dv, demand_x(pool, price), 1e-6 * demand_x(pool, price));
      const double dy = (demand_y(pool, price + h) - demand_y(pool, price - h)) / (2 * h);
      EXPECT_NEAR(dy, marginal_liquidity(pool, price), 1e-6 * dy);
      const double dx = (demand_x(pool, price + h) - demand_x(pool, price - h)) / (2 * h);
      EXPECT_NEAR(dy, -price * dx, 1e-6 * dy);
      EXPECT_NEAR(demand_x_slope(pool, price), dx, 1e-6 * std::abs(dx));
      const double h2 = 1e-3 * price;
      const double d2v = (pool_value(pool, price + h2) - 2 * pool_value(pool, price) +
                          pool_value(pool, price - h2)) / (h2 * h2);
      EXPECT_LE(d2v, 1e-9);
    }
  }
}

TEST(ArbProfit, ReferenceValues) {
  const auto pool = PoolModel::constant_product(1.0);
  const auto fees = FeeSchedule::symmetric_log(0.003);
  EXPECT_EQ(arb_profit(pool, fees, 1.0, 0.001), 0.0);
  EXPECT_EQ(arb_profit(pool, fees, 1.0, 0.003), 0.0);
  EXPECT_EQ(arb_profit(pool, fees, 1.0, -0.003), 0.0);
  // high-precision reference values
  EXPECT_NEAR(arb_profit(pool, fees, 1.0, 0.01), 1.2268401312128545e-5, 1e-18);
  EXPECT_NEAR(fee_paid(pool, fees, 1.0, 0.01), 1.0481650349373160e-5, 1e-18);
  EXPECT_EQ(fee_paid(pool, fees, 1.0, 0.0), 0.0);
  const auto free = FeeSchedule::symmetric_log(0.0);
  EXPECT_EQ(fee_paid(pool, free, 1.0, 0.02), 0.0);
  EXPECT_EQ(fee_paid(pool, free, 1.0, -0.02), 0.0);
}

TEST(ArbProfit, MatchesDirectTradeAccounting) {
  std::vector<PoolModel> pools = {PoolModel::constant_product(1.0),
                                  PoolModel::geometric_mean(2.0, 0.3)};
  const auto fees = FeeSchedule::asymmetric_log(0.002, 0.005);
  for (const auto& pool : pools) {
    for (double price : {0.5, 1.0, 3.0}) {
      for (double z : {0.004, 0.03, 0.2, -0.008, -0.05, -0.3}) {
        const double edge = z > 0 ? fees.gamma_plus : -fees.gamma_minus;
        const double direct = trade_profit(pool, fees, price, price * std::exp(-z),
                                           price * std::exp(-edge));
        const double a = arb_profit(pool, fees, price, z);
        EXPECT_NEAR(a, direct, 1e-12 * pool_value(pool, price)) << z;
        const double dy = std::abs(demand_y(pool, price * std::exp(-edge)) -
                                   demand_y(pool, price * std::exp(-z)));
        const double fee = z > 0 ? std::expm1(fees.gamma_plus) * dy
                                 : -std::expm1(-fees.gamma_minus) * dy;
        EXPECT_NEAR(fee_paid(pool, fees, price, z), fee, 1e-14 * pool_value(pool, price));
      }
    }
  }
}

TEST(ArbProfit, NonNegativeAndContinuous) {
  const auto pool = PoolModel::geometric_mean(1.0, 0.4);
  const auto fees = FeeSchedule::asymmetric_log(0.003, 0.001);
  double prev = arb_profit(pool, fees, 1.0, -0.05);
  for (int i = 1; i <= 10000; ++i) {
    const double z = -0.05 + 0.1 * i / 10000.0;
    const double a = arb_profit(pool, fees, 1.0, z);
    EXPECT_GE(a, 0.0);
    EXPECT_GE(fee_paid(pool, fees, 1.0, z), 0.0);
    EXPECT_LT(std::abs(a - prev), 1e-5);
    prev = a;
  }
  EXPECT_EQ(arb_profit(pool, fees, 1.0, 1e-300 + 0.003), 0.0);
  EXPECT_GT(arb_profit(pool, fees, 1.0, 0.003 + 1e-6), 0.0);
}

TEST(ArbProfit, Homogeneity) {
  const auto fees = FeeSchedule::symmetric_log(0.003);
  for (double z : {0.01, -0.02}) {
    const double a1 = arb_profit(PoolModel::geometric_mean(1.0, 0.3), fees, 2.0, z);
    const double a3 = arb_profit(PoolModel::geometric_mean(3.0, 0.3), fees, 2.0, z);
    EXPECT_NEAR(a3, 3.0 * a1, 1e-15);
    const auto cp = PoolModel::constant_product(1.0);
    const double ref = arb_profit(cp, fees, 1.0, z) / pool_value(cp, 1.0);
    for (double price : {0.01, 0.3, 2.0, 50.0, 1e4}) {
      EXPECT_NEAR(arb_profit(cp, fees, price, z) / pool_value(cp, price), ref, 1e-12);
    }
  }
}

TEST(MyopicTrade, Cases) {
  const auto pool = PoolModel::constant_product(1.0);
  const auto fees = FeeSchedule::symmetric_log(0.003);
  const auto buy = myopic_trade(pool, fees, 1.0, 0.01);
  EXPECT_TRUE(buy.traded);
  EXPECT_EQ(buy.z_post, 0.003);
  EXPECT_NEAR(buy.arb_profit, 1.2268401312128545e-5, 1e-18);
  EXPECT_LT(buy.delta_x, 0.0);
  EXPECT_GT(buy.delta_y, 0.0);

  const auto idle = myopic_trade(pool, fees, 1.0, 0.0);
  EXPECT_FALSE(idle.traded);
  EXPECT_EQ(idle.z_post, 0.0);
  EXPECT_EQ(idle.arb_profit, 0.0);
  EXPECT_EQ(idle.fee_paid, 0.0);

  const auto sell = myopic_trade(pool, fees, 1.0, -0.01);
  EXPECT_TRUE(sell.traded);
  EXPECT_EQ(sell.z_post, -0.003);
  EXPECT_GT(sell.delta_x, 0.0);
  EXPECT_LT(sell.delta_y, 0.0);
  // mirror image up to the numeraire leg being priced on the other band edge
  EXPECT_NEAR(sell.arb_profit * std::exp(0.003), buy.arb_profit, 1e-17);
}

TEST(MyopicTrade, OptimalAgainstBruteForceGrid) {
  random::Stream rng(2024, 7);
  const std::vector<PoolModel> pools = {PoolModel::constant_product(1.0),
                                        PoolModel::geometric_mean(1.0, 0.3)};
  const auto fees = FeeSchedule::asymmetric_log(0.003, 0.002);
  for (int trial = 0; trial < 20; ++trial) {
    const auto& pool = pools[trial % 2];
    const double price = std::exp(4.0 * rng.uniform() - 2.0);
    double z = 0.004 + 0.1 * rng.uniform();
    if (trial % 3 == 0) z = -z;
    const double pool_pre = price * std::exp(-z);
    const double best = myopic_trade(pool, fees, price, z).arb_profit;
    for (int k = 0; k <= 1000; ++k) {
      // candidate post-trade pool prices spanning both directions
      const double post = pool_pre * std::exp(-0.25 + 0.5 * k / 1000.0);
      const double alt = trade_profit(pool, fees, price, pool_pre, post);
      EXPECT_GE(best, alt - 1e-12) << "trial " << trial << " k " << k;
    }
  }
}
