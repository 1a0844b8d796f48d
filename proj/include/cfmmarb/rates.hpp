#pragma once

// Instantaneous rates (per day) of arbitrage profit, fee income and
// loss-versus-rebalancing for a pool whose mispricing sits in its stationary
// law. All functions here assume the symmetric model (mu = sigma^2/2, equal
// buy and sell fees).

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cfmmarb/cfmm.hpp"
#include "cfmmarb/errors.hpp"
#include "cfmmarb/mispricing.hpp"
#include "cfmmarb/numeric.hpp"
#include "cfmmarb/quadrature.hpp"

namespace cfmmarb {

inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();

enum class RateMethod { ClosedForm, Quadrature };

inline const char* to_string(RateMethod m) {
  return m == RateMethod::ClosedForm ? "closed_form" : "quadrature";
}

// Frictionless rate (sigma^2 P / 2) y*'(P).
inline double lvr_rate(const PoolModel& pool, double price, double sigma) {
  detail::require_positive(price, "price");
  detail::require_non_negative(sigma, "sigma");
  return 0.5 * sigma * sigma * price * marginal_liquidity(pool, price);
}

// Outcome of  lambda P_trade int_0^inf h(x) kappa e^{-kappa x} dx,
// kappa = sqrt(2 lambda)/sigma, for h the band-averaged profit or fee.
struct StationaryIntegral {
  double value = 0.0;
  bool diverged = false;
  bool used_fallback = false;
  std::string diagnostic;
};

namespace detail {

enum class Integrand { Profit, Fee };

inline double band_average(Integrand which, const PoolModel& pool, double price,
                           double gamma, double excess) {
  if (which == Integrand::Profit) {
    return 0.5 * (arb_profit_above_band(pool, price, gamma, excess) +
                  arb_profit_below_band(pool, price, gamma, excess));
  }
  return 0.5 * (fee_above_band(pool, price, gamma, excess) +
                fee_below_band(pool, price, gamma, excess));
}

inline StationaryIntegral stationary_rate(Integrand which,
                                          const PoolModel& pool, double price,
                                          const MarketParams& params,
                                          const FeeSchedule& fees) {
  detail::require_positive(price, "price");
  const double pt = p_trade(params, fees);
  const double gamma = fees.gamma_plus;
  const double kappa = params.tail_rate();
  auto h = [&](double x) { return band_average(which, pool, price, gamma, x); };

  StationaryIntegral out;

  // Log-slope of h at the outer probe points x = 5k/kappa, k = 3, 4. The
  // integral diverges once h grows at least as fast as the exponential weight.
  const double x3 = 15.0 / kappa;
  const double x4 = 20.0 / kappa;
  const double h3 = h(x3);
  const double h4 = h(x4);
  if (h3 > 0.0 && h4 > 0.0) {
    const double growth = (std::log(h4) - std::log(h3)) / (x4 - x3);
    if (!std::isfinite(h4) || growth >= kappa - 1e-6) {
      out.value = kInfiniteRate;
      out.diverged = true;
      out.diagnostic = "integrand growth rate " + std::to_string(growth) +
                       " reaches the stationary tail decay rate " +
                       std::to_string(kappa) + "; expected rate is infinite";
      return out;
    }
  }

  auto g = [&](double u) { return h(u / kappa); };
  const double coarse = quadrature::gauss_laguerre(g, 64);
  const double fine = quadrature::gauss_laguerre(g, 128);
  double integral = coarse;
  const double scale = std::max(std::abs(fine), std::numeric_limits<double>::min());
  if (!(std::abs(fine - coarse) <= 1e-9 * scale)) {
    out.used_fallback = true;
    integral = quadrature::integrate_adaptive(
                   [&](double u) {
                     const double v = g(u);
                     return v == 0.0 ? 0.0 : v * std::exp(-u);
                   },
                   0.0, quadrature::kInfinity, 1e-12)
                   .value;
    if (!std::isfinite(integral)) {
      out.value = kInfiniteRate;
      out.diverged = true;
      out.diagnostic = "adaptive quadrature did not converge";
      return out;
    }
  }
  out.value = params.lambda * pt * integral;
  return out;
}

}  // namespace detail

inline StationaryIntegral arb_rate_detailed(const PoolModel& pool, double price,
                                            const MarketParams& params,
                                            const FeeSchedule& fees) {
  return detail::stationary_rate(detail::Integrand::Profit, pool, price, params,
                                 fees);
}

inline StationaryIntegral fee_rate_detailed(const PoolModel& pool, double price,
                                            const MarketParams& params,
                                            const FeeSchedule& fees) {
  return detail::stationary_rate(detail::Integrand::Fee, pool, price, params,
                                 fees);
}

// lambda E_pi[A(P, z)]; +inf when the expectation diverges.
inline double arb_rate(const PoolModel& pool, double price,
                       const MarketParams& params, const FeeSchedule& fees) {
  return arb_rate_detailed(pool, price, params, fees).value;
}

// lambda E_pi[F(P, z)]; +inf when the expectation diverges.
inline double fee_rate(const PoolModel& pool, double price,
                       const MarketParams& params, const FeeSchedule& fees) {
  return fee_rate_detailed(pool, price, params, fees).value;
}

// Constant product pool, per unit of pool value. Price independent.
inline double arb_rate_cpmm(const MarketParams& params, const FeeSchedule& fees) {
  const double pt = p_trade(params, fees);
  const double s2 = params.sigma * params.sigma;
  if (!(params.lambda > s2 / 8.0)) return kInfiniteRate;
  return s2 / 8.0 * pt * std::cosh(0.5 * fees.gamma_plus) /
         (1.0 - s2 / (8.0 * params.lambda));
}

// Constant product fee intensity per unit of pool value:
// (sigma^2/8) sinh(gamma/2)/(gamma/2) (1 - P_trade) / (1 - sigma^2/(8 lambda)).
inline double fee_rate_cpmm(const MarketParams& params, const FeeSchedule& fees) {
  const double pt = p_trade(params, fees);
  const double gamma = fees.gamma_plus;
  if (gamma == 0.0) return 0.0;
  const double s2 = params.sigma * params.sigma;
  if (!(params.lambda > s2 / 8.0)) return kInfiniteRate;
  return s2 / 8.0 * numeric::sinhc(0.5 * gamma) * (1.0 - pt) /
         (1.0 - s2 / (8.0 * params.lambda));
}

// Fast-block approximation of the arbitrage rate.
inline double arb_rate_asymptotic(const PoolModel& pool, double price,
                                  const MarketParams& params,
                                  const FeeSchedule& fees) {
  detail::require_positive(price, "price");
  const double pt = p_trade(params, fees);
  const double gamma = fees.gamma_plus;
  const double avg_liquidity =
      0.5 * (marginal_liquidity(pool, price * std::exp(-gamma)) +
             marginal_liquidity(pool, price * std::exp(gamma)));
  return 0.5 * params.sigma * params.sigma * price * avg_liquidity * pt;
}

// Fast-block approximation of the fee rate; zero in the zero-fee limit.
inline double fee_rate_asymptotic(const PoolModel& pool, double price,
                                  const MarketParams& params,
                                  const FeeSchedule& fees) {
  detail::require_positive(price, "price");
  const double pt = p_trade(params, fees);
  const double gamma = fees.gamma_plus;
  if (gamma == 0.0) return 0.0;
  const double weighted =
      (-std::expm1(-gamma) * marginal_liquidity(pool, price * std::exp(-gamma)) +
       std::expm1(gamma) * marginal_liquidity(pool, price * std::exp(gamma))) /
      (2.0 * gamma);
  return 0.5 * params.sigma * params.sigma * price * weighted * (1.0 - pt);
}

struct RateReport {
  double price = 0.0;
  double pool_value = 0.0;
  double lvr_rate = 0.0;
  double arb_rate = 0.0;
  double fee_rate = 0.0;
  double lvr_rate_normalized = 0.0;
  double arb_rate_normalized = 0.0;
  double fee_rate_normalized = 0.0;
  double p_trade = 0.0;
  double sigma_z = 0.0;
  double arb_asymptotic = 0.0;
  double fee_asymptotic = 0.0;
  RateMethod method = RateMethod::Quadrature;
  std::string diagnostic;
};

// Constant product pools use the closed forms; everything else integrates
// against the stationary law.
inline RateReport rate_report(const PoolModel& pool, double price,
                              const MarketParams& params,
                              const FeeSchedule& fees) {
  RateReport r;
  r.price = price;
  r.pool_value = pool_value(pool, price);
  r.lvr_rate = lvr_rate(pool, price, params.sigma);
  r.p_trade = p_trade(params, fees);
  r.sigma_z = mispricing_stdev(params, fees);
  r.arb_asymptotic = arb_rate_asymptotic(pool, price, params, fees);
  r.fee_asymptotic = fee_rate_asymptotic(pool, price, params, fees);
  if (pool.kind() == PoolKind::ConstantProduct) {
    r.method = RateMethod::ClosedForm;
    r.arb_rate = arb_rate_cpmm(params, fees) * r.pool_value;
    r.fee_rate = fee_rate_cpmm(params, fees) * r.pool_value;
    if (std::isinf(r.arb_rate)) {
      r.diagnostic = "lambda <= sigma^2/8: expected arbitrage profit is infinite";
    }
  } else {
    r.method = RateMethod::Quadrature;
    const auto arb = arb_rate_detailed(pool, price, params, fees);
    const auto fee = fee_rate_detailed(pool, price, params, fees);
    r.arb_rate = arb.value;
    r.fee_rate = fee.value;
    r.diagnostic = arb.diagnostic.empty() ? fee.diagnostic : arb.diagnostic;
  }
  r.lvr_rate_normalized = r.lvr_rate / r.pool_value;
  r.arb_rate_normalized = r.arb_rate / r.pool_value;
  r.fee_rate_normalized = r.fee_rate / r.pool_value;
  return r;
}

// One fee level of the accuracy-versus-profit trade-off. Rates are per unit
// of pool value; lvr_ptrade is the LVR x P_trade approximation of the
// arbitrage rate and pct_error its relative error against the exact rate.
struct FrontierRow {
  double gamma = 0.0;
  double arb = 0.0;
  double sigma_z = 0.0;
  double p_trade = 0.0;
  double lvr_ptrade = 0.0;
  double lvr = 0.0;
  double pct_error = 0.0;
  double arb_asymptotic = 0.0;
  RateMethod method = RateMethod::ClosedForm;
  bool infinite = false;
};

inline std::vector<FrontierRow> frontier(const MarketParams& params,
                                         const std::vector<double>& gammas,
                                         const PoolModel& pool,
                                         double price = 1.0) {
  std::vector<FrontierRow> rows;
  rows.reserve(gammas.size());
  const double value = pool_value(pool, price);
  for (double gamma : gammas) {
    const auto fees = FeeSchedule::symmetric_log(gamma);
    FrontierRow row;
    row.gamma = gamma;
    row.p_trade = p_trade(params, fees);
    row.sigma_z = mispricing_stdev(params, fees);
    row.lvr = lvr_rate(pool, price, params.sigma) / value;
    row.lvr_ptrade = row.lvr * row.p_trade;
    row.arb_asymptotic = arb_rate_asymptotic(pool, price, params, fees) / value;
    if (pool.kind() == PoolKind::ConstantProduct) {
      row.arb = arb_rate_cpmm(params, fees);
      row.method = RateMethod::ClosedForm;
    } else {
      row.arb = arb_rate(pool, price, params, fees) / value;
      row.method = RateMethod::Quadrature;
    }
    row.infinite = std::isinf(row.arb);
    row.pct_error = row.infinite ? std::numeric_limits<double>::quiet_NaN()
                                 : (row.arb - row.lvr_ptrade) / row.arb;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cfmmarb
