#pragma once

// Two-asset constant function market makers: value function, demand curves,
// proportional fees and the myopic arbitrage trade.
//
// Prices are numeraire per unit of risky asset. A pool holds reserves
// (x*(p), y*(p)) when its implied price is p. The log-mispricing of a pool
// against an external price P is z = log(P / p).

#include <cmath>
#include <string>

#include "cfmmarb/errors.hpp"
#include "cfmmarb/numeric.hpp"

namespace cfmmarb {

enum class PoolKind { ConstantProduct, GeometricMean };

// Bonding function x^w y^(1-w) = L. The constant product pool is the w = 1/2
// member with the invariant written as sqrt(x y) = L, so both kinds share one
// parameterization of L.
class PoolModel {
 public:
  static PoolModel constant_product(double level) {
    detail::require_positive(level, "pool level L");
    return PoolModel(PoolKind::ConstantProduct, level, 0.5);
  }

  static PoolModel geometric_mean(double level, double weight) {
    detail::require_positive(level, "pool level L");
    if (!(weight > 0.0 && weight < 1.0)) {
      throw DomainError("geometric mean weight must lie in (0,1), got " +
                        std::to_string(weight));
    }
    return PoolModel(PoolKind::GeometricMean, level, weight);
  }

  PoolKind kind() const { return kind_; }
  double level() const { return level_; }
  // Weight of the risky asset; 1/2 for the constant product pool.
  double weight() const { return weight_; }

  // y*(p) / (p x*(p)), constant across prices for this family.
  double reserve_ratio() const { return (1.0 - weight_) / weight_; }

  std::string describe() const {
    if (kind_ == PoolKind::ConstantProduct) return "cpmm";
    return "gmm:" + std::to_string(weight_);
  }

 private:
  PoolModel(PoolKind kind, double level, double weight)
      : kind_(kind), level_(level), weight_(weight) {}

  PoolKind kind_;
  double level_;
  double weight_;
};

// Proportional fees expressed in log-price units. The no-trade band is
// [-gamma_minus, +gamma_plus].
struct FeeSchedule {
  double gamma_plus = 0.0;   // arbitrageur buys the risky asset from the pool
  double gamma_minus = 0.0;  // arbitrageur sells the risky asset to the pool

  static FeeSchedule symmetric_log(double gamma) {
    return asymmetric_log(gamma, gamma);
  }

  static FeeSchedule asymmetric_log(double gamma_plus, double gamma_minus) {
    detail::require_non_negative(gamma_plus, "gamma_plus");
    detail::require_non_negative(gamma_minus, "gamma_minus");
    return FeeSchedule{gamma_plus, gamma_minus};
  }

  // Fees quoted in basis points of price. The direct convention uses the quote
  // as the log fee; the compound convention charges exactly `fee` of the
  // traded numeraire: gamma+ = log(1 + fee), gamma- = -log(1 - fee).
  static FeeSchedule from_basis_points(double buy_bp, double sell_bp,
                                       bool compound) {
    detail::require_non_negative(buy_bp, "buy fee (bp)");
    detail::require_non_negative(sell_bp, "sell fee (bp)");
    const double buy = buy_bp * 1e-4;
    const double sell = sell_bp * 1e-4;
    if (!compound) return asymmetric_log(buy, sell);
    if (!(sell < 1.0)) throw DomainError("sell fee must be below 100%");
    return asymmetric_log(std::log1p(buy), -std::log1p(-sell));
  }

  bool symmetric() const { return gamma_plus == gamma_minus; }
  double band_lo() const { return -gamma_minus; }
  double band_hi() const { return gamma_plus; }
};

struct TradeOutcome {
  double z_pre = 0.0;
  double z_post = 0.0;
  // Reserve changes, positive when the asset flows into the pool.
  double delta_x = 0.0;
  double delta_y = 0.0;
  double arb_profit = 0.0;
  double fee_paid = 0.0;
  bool traded = false;
};

inline double demand_x(const PoolModel& pool, double price) {
  detail::require_positive(price, "price");
  if (pool.kind() == PoolKind::ConstantProduct) {
    return pool.level() / std::sqrt(price);
  }
  const double w = pool.weight();
  return pool.level() * std::pow(w / ((1.0 - w) * price), 1.0 - w);
}

inline double demand_y(const PoolModel& pool, double price) {
  detail::require_positive(price, "price");
  if (pool.kind() == PoolKind::ConstantProduct) {
    return pool.level() * std::sqrt(price);
  }
  const double w = pool.weight();
  return pool.level() * std::pow((1.0 - w) * price / w, w);
}

inline double pool_value(const PoolModel& pool, double price) {
  // P x* + y* = P x* / w on this family.
  return price * demand_x(pool, price) / pool.weight();
}

// y*'(P).
inline double marginal_liquidity(const PoolModel& pool, double price) {
  return pool.weight() * demand_y(pool, price) / price;
}

// x*'(P) = -y*'(P) / P.
inline double demand_x_slope(const PoolModel& pool, double price) {
  return -(1.0 - pool.weight()) * demand_x(pool, price) / price;
}

// Profit and fee of a myopic arbitrage, parameterized by how far the
// mispricing sits beyond the band edge (excess >= 0). Evaluated without the
// catastrophic cancellation of the textbook difference-of-reserves form: the
// first-order terms cancel analytically and only e^a - 1 - a remainders are
// summed.
inline double arb_profit_above_band(const PoolModel& pool, double price,
                                    double gamma_plus, double excess) {
  if (!(excess > 0.0)) return 0.0;
  const double w = pool.weight();
  const double post_price = price * std::exp(-gamma_plus);
  const double bracket =
      numeric::expm1_minus_linear((1.0 - w) * excess) +
      pool.reserve_ratio() * numeric::expm1_minus_linear(-w * excess);
  return price * demand_x(pool, post_price) * bracket;
}

inline double arb_profit_below_band(const PoolModel& pool, double price,
                                    double gamma_minus, double excess) {
  if (!(excess > 0.0)) return 0.0;
  const double w = pool.weight();
  const double post_price = price * std::exp(gamma_minus);
  const double bracket =
      numeric::expm1_minus_linear(-(1.0 - w) * excess) +
      pool.reserve_ratio() * numeric::expm1_minus_linear(w * excess);
  return price * demand_x(pool, post_price) * bracket;
}

inline double fee_above_band(const PoolModel& pool, double price,
                             double gamma_plus, double excess) {
  if (!(excess > 0.0)) return 0.0;
  const double post_price = price * std::exp(-gamma_plus);
  return std::expm1(gamma_plus) * demand_y(pool, post_price) *
         -std::expm1(-pool.weight() * excess);
}

inline double fee_below_band(const PoolModel& pool, double price,
                             double gamma_minus, double excess) {
  if (!(excess > 0.0)) return 0.0;
  const double post_price = price * std::exp(gamma_minus);
  return -std::expm1(-gamma_minus) * demand_y(pool, post_price) *
         std::expm1(pool.weight() * excess);
}

// A(P, z): profit of the arbitrageur arriving at external price P with
// pre-trade mispricing z.
inline double arb_profit(const PoolModel& pool, const FeeSchedule& fees,
                         double price, double z) {
  detail::require_positive(price, "price");
  if (z > fees.gamma_plus) {
    return arb_profit_above_band(pool, price, fees.gamma_plus,
                                 z - fees.gamma_plus);
  }
  if (z < -fees.gamma_minus) {
    return arb_profit_below_band(pool, price, fees.gamma_minus,
                                 -fees.gamma_minus - z);
  }
  return 0.0;
}

// F(P, z): fee the same arbitrageur pays to the pool.
inline double fee_paid(const PoolModel& pool, const FeeSchedule& fees,
                       double price, double z) {
  detail::require_positive(price, "price");
  if (z > fees.gamma_plus) {
    return fee_above_band(pool, price, fees.gamma_plus, z - fees.gamma_plus);
  }
  if (z < -fees.gamma_minus) {
    return fee_below_band(pool, price, fees.gamma_minus,
                          -fees.gamma_minus - z);
  }
  return 0.0;
}

// Outside the band the arbitrageur trades the pool price to the nearest band
// edge; inside it does nothing.
inline TradeOutcome myopic_trade(const PoolModel& pool, const FeeSchedule& fees,
                                 double price, double z_pre) {
  detail::require_positive(price, "price");
  TradeOutcome out;
  out.z_pre = z_pre;
  out.z_post = z_pre;
  if (z_pre > fees.gamma_plus) {
    out.z_post = fees.gamma_plus;
  } else if (z_pre < -fees.gamma_minus) {
    out.z_post = -fees.gamma_minus;
  } else {
    return out;
  }
  out.traded = true;
  const double pre_price = price * std::exp(-z_pre);
  const double post_price = price * std::exp(-out.z_post);
  out.delta_x = demand_x(pool, post_price) - demand_x(pool, pre_price);
  out.delta_y = demand_y(pool, post_price) - demand_y(pool, pre_price);
  out.arb_profit = arb_profit(pool, fees, price, z_pre);
  out.fee_paid = fee_paid(pool, fees, price, z_pre);
  return out;
}

}  // namespace cfmmarb
