#pragma once

// Stationary law of the log-mispricing z between the external price and the
// pool price. Between arbitrageur arrivals z is a Brownian motion with drift
// mu - sigma^2/2; at each Poisson(lambda) arrival it is clamped into the
// no-trade band [-gamma_minus, +gamma_plus].

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "cfmmarb/cfmm.hpp"
#include "cfmmarb/errors.hpp"
#include "cfmmarb/numeric.hpp"
#include "cfmmarb/quadrature.hpp"

namespace cfmmarb {

inline constexpr double kSecondsPerDay = 86400.0;

// Rates are per day, volatility per sqrt(day).
struct MarketParams {
  double mu = 0.0;
  double sigma = 0.0;
  double lambda = 0.0;

  static MarketParams with_drift(double mu, double sigma, double lambda) {
    detail::require_positive(sigma, "sigma");
    detail::require_positive(lambda, "lambda");
    if (!std::isfinite(mu)) throw DomainError("mu must be finite");
    return MarketParams{mu, sigma, lambda};
  }

  // mu = sigma^2 / 2, the driftless-mispricing case.
  static MarketParams symmetric(double sigma, double lambda) {
    return with_drift(0.5 * sigma * sigma, sigma, lambda);
  }

  static MarketParams from_block_time(double sigma_daily, double block_time_s) {
    detail::require_positive(block_time_s, "block time");
    return symmetric(sigma_daily, kSecondsPerDay / block_time_s);
  }

  double dt() const { return 1.0 / lambda; }
  double drift_z() const { return mu - 0.5 * sigma * sigma; }
  bool driftless() const {
    return std::abs(drift_z()) <= 1e-12 * sigma * sigma;
  }
  // Exponential rate of the stationary tails when the drift vanishes.
  double tail_rate() const { return std::sqrt(2.0 * lambda) / sigma; }
};

namespace detail {

inline void require_symmetric_fee(const FeeSchedule& fees, const char* what) {
  if (!fees.symmetric()) {
    throw UnsupportedConfiguration(
        std::string(what) +
        " requires gamma_plus == gamma_minus; use nonsymmetric_law for "
        "asymmetric fees");
  }
}

inline void require_symmetric(const MarketParams& params,
                              const FeeSchedule& fees, const char* what) {
  require_symmetric_fee(fees, what);
  if (!params.driftless()) {
    throw UnsupportedConfiguration(std::string(what) +
                                   " requires mu = sigma^2/2; use "
                                   "nonsymmetric_law for drifting mispricing");
  }
}

}  // namespace detail

// eta = sqrt(2 lambda) gamma / sigma.
inline double eta(const MarketParams& params, const FeeSchedule& fees) {
  detail::require_symmetric_fee(fees, "eta");
  return params.tail_rate() * fees.gamma_plus;
}

// Long-run fraction of arrivals that find z outside the band.
inline double p_trade(const MarketParams& params, const FeeSchedule& fees) {
  detail::require_symmetric(params, fees, "p_trade");
  return 1.0 / (1.0 + eta(params, fees));
}

// sqrt(E[z^2]) under the stationary law; the gamma -> 0 value
// sigma / sqrt(lambda) is returned for a zero fee.
inline double mispricing_stdev(const MarketParams& params,
                               const FeeSchedule& fees) {
  const double pt = p_trade(params, fees);
  const double gamma = fees.gamma_plus;
  const double tail_mean = params.sigma / std::sqrt(2.0 * params.lambda);
  const double second_moment =
      (1.0 - pt) * gamma * gamma / 3.0 +
      pt * ((gamma + tail_mean) * (gamma + tail_mean) + tail_mean * tail_mean);
  return std::sqrt(second_moment);
}

enum class CoreShape { Uniform, DriftExponential };

// Three-segment density:
//   z > hi : density_hi * exp(-tail_rate_plus (z - hi))
//   core   : core_level + core_slope * g(z),  g(z) = (exp(zeta_0 z) - 1)/zeta_0
//   z < lo : density_lo * exp(+tail_rate_minus (z - lo))
// The core is uniform when the mispricing has no drift.
struct StationaryLaw {
  double band_lo = 0.0;
  double band_hi = 0.0;
  double pi_0 = 0.0;
  double pi_plus = 0.0;
  double pi_minus = 0.0;
  double tail_rate_plus = 0.0;
  double tail_rate_minus = 0.0;
  CoreShape core_shape = CoreShape::Uniform;
  double zeta_0 = 0.0;
  double core_level = 0.0;
  double core_slope = 0.0;

  double density_hi() const { return pi_plus * tail_rate_plus; }
  double density_lo() const { return pi_minus * tail_rate_minus; }
  double p_trade() const { return pi_plus + pi_minus; }
};

namespace detail {

inline double core_g(const StationaryLaw& law, double z) {
  return z * numeric::expm1_ratio(law.zeta_0 * z);
}

// Antiderivative of core_g vanishing at 0.
inline double core_g_integral(const StationaryLaw& law, double z) {
  return z * z * numeric::expm1_minus_linear_ratio(law.zeta_0 * z);
}

inline double core_mass_below(const StationaryLaw& law, double z) {
  return law.core_level * (z - law.band_lo) +
         law.core_slope *
             (core_g_integral(law, z) - core_g_integral(law, law.band_lo));
}

}  // namespace detail

// Symmetric model: uniform core, exponential tails with rate sqrt(2 lambda)/sigma.
inline StationaryLaw stationary_law(const MarketParams& params,
                                    const FeeSchedule& fees) {
  detail::require_symmetric(params, fees, "stationary_law");
  const double gamma = fees.gamma_plus;
  if (!(gamma > 0.0)) {
    throw DegenerateLaw(
        "zero fee has no three-segment stationary density; use p_trade / "
        "mispricing_stdev limits or the simulator");
  }
  const double e = eta(params, fees);
  StationaryLaw law;
  law.band_lo = -gamma;
  law.band_hi = gamma;
  law.pi_0 = e / (1.0 + e);
  law.pi_plus = 0.5 / (1.0 + e);
  law.pi_minus = law.pi_plus;
  law.tail_rate_plus = params.tail_rate();
  law.tail_rate_minus = law.tail_rate_plus;
  law.core_shape = CoreShape::Uniform;
  law.core_level = law.pi_0 / (2.0 * gamma);
  return law;
}

// General drift and asymmetric band. Tail rates are the negative roots of
// sigma^2/2 s^2 + drift s - lambda; the core solves the stationary forward
// equation sigma^2/2 p'' - drift p' = 0. The four amplitudes follow from
// density continuity at both band edges, the probability-flux balance at the
// upper edge (reinjection of the upper tail mass) and normalization. The
// flux balance at the lower edge is then implied; `lower_flux_residual`
// reports how well it holds.
struct NonsymmetricSolution {
  StationaryLaw law;
  double lower_flux_residual = 0.0;
};

inline NonsymmetricSolution solve_nonsymmetric_law(const MarketParams& params,
                                                   const FeeSchedule& fees) {
  const double hi = fees.gamma_plus;
  const double lo = -fees.gamma_minus;
  if (!(hi > 0.0) || !(fees.gamma_minus > 0.0)) {
    throw DegenerateLaw("nonsymmetric_law needs gamma_plus, gamma_minus > 0");
  }
  const double drift = params.driftless() ? 0.0 : params.drift_z();
  const double s2 = params.sigma * params.sigma;
  const double root = std::sqrt(drift * drift + 2.0 * params.lambda * s2);

  StationaryLaw law;
  law.band_lo = lo;
  law.band_hi = hi;
  // zeta+ zeta- = 2 lambda / sigma^2; take the non-cancelling form of each.
  law.tail_rate_plus = drift > 0.0 ? 2.0 * params.lambda / (root + drift)
                                   : (root - drift) / s2;
  law.tail_rate_minus = drift < 0.0 ? 2.0 * params.lambda / (root - drift)
                                    : (root + drift) / s2;
  law.zeta_0 = 2.0 * drift / s2;
  law.core_shape = drift == 0.0 ? CoreShape::Uniform : CoreShape::DriftExponential;

  const double zp = law.tail_rate_plus;
  const double zm = law.tail_rate_minus;
  const double g_hi = detail::core_g(law, hi);
  const double g_lo = detail::core_g(law, lo);
  const double dg_hi = std::exp(law.zeta_0 * hi);
  const double dg_lo = std::exp(law.zeta_0 * lo);

  // Unknowns: [density_hi, density_lo, core_level, core_slope].
  std::array<std::array<double, 5>, 4> m{{
      {-1.0, 0.0, 1.0, g_hi, 0.0},
      {0.0, -1.0, 1.0, g_lo, 0.0},
      {-0.5 * s2 * zp + params.lambda / zp, 0.0, 0.0, -0.5 * s2 * dg_hi, 0.0},
      {1.0 / zp, 1.0 / zm, hi - lo,
       detail::core_g_integral(law, hi) - detail::core_g_integral(law, lo),
       1.0},
  }};
  for (std::size_t col = 0; col < 4; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < 4; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    std::swap(m[col], m[pivot]);
    for (std::size_t r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < 5; ++c) m[r][c] -= f * m[col][c];
    }
  }
  const double density_hi = m[0][4] / m[0][0];
  const double density_lo = m[1][4] / m[1][1];
  law.core_level = m[2][4] / m[2][2];
  law.core_slope = m[3][4] / m[3][3];
  if (law.core_shape == CoreShape::Uniform) law.core_slope = 0.0;

  law.pi_plus = density_hi / zp;
  law.pi_minus = density_lo / zm;
  law.pi_0 = detail::core_mass_below(law, hi);

  NonsymmetricSolution out;
  out.law = law;
  out.lower_flux_residual =
      0.5 * s2 * (law.core_slope * dg_lo - zm * density_lo) +
      params.lambda * law.pi_minus;
  return out;
}

inline StationaryLaw nonsymmetric_law(const MarketParams& params,
                                      const FeeSchedule& fees) {
  if (params.driftless() && fees.symmetric()) {
    return stationary_law(params, fees);
  }
  return solve_nonsymmetric_law(params, fees).law;
}

// Whichever closed form applies to (params, fees).
inline StationaryLaw law_for(const MarketParams& params, const FeeSchedule& fees) {
  return nonsymmetric_law(params, fees);
}

inline double density(const StationaryLaw& law, double z) {
  if (z > law.band_hi) {
    return law.density_hi() * std::exp(-law.tail_rate_plus * (z - law.band_hi));
  }
  if (z < law.band_lo) {
    return law.density_lo() * std::exp(law.tail_rate_minus * (z - law.band_lo));
  }
  return law.core_level + law.core_slope * detail::core_g(law, z);
}

inline double cdf(const StationaryLaw& law, double z) {
  if (z < law.band_lo) {
    return law.pi_minus * std::exp(law.tail_rate_minus * (z - law.band_lo));
  }
  if (z > law.band_hi) {
    return 1.0 - law.pi_plus * std::exp(-law.tail_rate_plus * (z - law.band_hi));
  }
  return law.pi_minus + detail::core_mass_below(law, z);
}

// Inverse CDF for u in (0,1).
inline double quantile(const StationaryLaw& law, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile needs u in (0,1)");
  if (u < law.pi_minus) {
    return law.band_lo + std::log(u / law.pi_minus) / law.tail_rate_minus;
  }
  if (u > 1.0 - law.pi_plus) {
    return law.band_hi - std::log((1.0 - u) / law.pi_plus) / law.tail_rate_plus;
  }
  const double target = u - law.pi_minus;
  const double width = law.band_hi - law.band_lo;
  if (law.core_shape == CoreShape::Uniform) {
    return std::min(law.band_hi, law.band_lo + width * target / law.pi_0);
  }
  // Safeguarded Newton; the core mass is strictly increasing.
  double a = law.band_lo;
  double b = law.band_hi;
  double z = law.band_lo + width * target / law.pi_0;
  for (int iter = 0; iter < 100; ++iter) {
    const double f = detail::core_mass_below(law, z) - target;
    if (f > 0.0) b = z; else a = z;
    const double step = f / density(law, z);
    double next = z - step;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - z) <= 1e-16 * width) return next;
    z = next;
  }
  return z;
}

// `uniform` returns draws in (0,1).
template <class UniformSource>
double sample(const StationaryLaw& law, UniformSource& uniform) {
  return quantile(law, uniform());
}

// E_law[f(z)], splitting at the band edges and mapping each tail onto the
// exponential weight of its rate.
template <class F>
double expectation(const StationaryLaw& law, F&& f, double rel_tol = 1e-13) {
  using quadrature::integrate_adaptive;
  using quadrature::kInfinity;
  const double core =
      integrate_adaptive([&](double z) { return f(z) * density(law, z); },
                         law.band_lo, law.band_hi, rel_tol)
          .value;
  const double upper =
      law.pi_plus *
      integrate_adaptive(
          [&](double u) {
            return f(law.band_hi + u / law.tail_rate_plus) * std::exp(-u);
          },
          0.0, kInfinity, rel_tol)
          .value;
  const double lower =
      law.pi_minus *
      integrate_adaptive(
          [&](double u) {
            return f(law.band_lo - u / law.tail_rate_minus) * std::exp(-u);
          },
          0.0, kInfinity, rel_tol)
          .value;
  return core + upper + lower;
}

// A twice-differentiable test function for the generator.
struct TestFunction {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;
};

namespace test_functions {

inline TestFunction monomial(int degree) {
  return TestFunction{
      "z^" + std::to_string(degree),
      [degree](double z) { return std::pow(z, degree); },
      [degree](double z) {
        return degree == 0 ? 0.0 : degree * std::pow(z, degree - 1);
      },
      [degree](double z) {
        return degree < 2 ? 0.0
                          : degree * (degree - 1) * std::pow(z, degree - 2);
      }};
}

// exp(-alpha (z - hi)) above the band, continued linearly (C^1) below it.
inline TestFunction upper_exponential(double alpha, double hi) {
  return TestFunction{
      "upper_exp(alpha=" + std::to_string(alpha) + ")",
      [=](double z) {
        return z > hi ? std::exp(-alpha * (z - hi)) : 1.0 - alpha * (z - hi);
      },
      [=](double z) {
        return z > hi ? -alpha * std::exp(-alpha * (z - hi)) : -alpha;
      },
      [=](double z) {
        return z > hi ? alpha * alpha * std::exp(-alpha * (z - hi)) : 0.0;
      }};
}

// exp(-alpha (lo - z)) below the band, continued linearly above it.
inline TestFunction lower_exponential(double alpha, double lo) {
  return TestFunction{
      "lower_exp(alpha=" + std::to_string(alpha) + ")",
      [=](double z) {
        return z < lo ? std::exp(alpha * (z - lo)) : 1.0 + alpha * (z - lo);
      },
      [=](double z) { return z < lo ? alpha * std::exp(alpha * (z - lo)) : alpha; },
      [=](double z) {
        return z < lo ? alpha * alpha * std::exp(alpha * (z - lo)) : 0.0;
      }};
}

// exp(-alpha z) on the band, tangent lines outside it.
inline TestFunction middle_exponential(double alpha, double lo, double hi) {
  auto edge = [=](double z) {
    if (z > hi) return hi;
    if (z < lo) return lo;
    return z;
  };
  return TestFunction{
      "middle_exp(alpha=" + std::to_string(alpha) + ")",
      [=](double z) {
        const double e = edge(z);
        return std::exp(-alpha * e) * (1.0 - alpha * (z - e));
      },
      [=](double z) { return -alpha * std::exp(-alpha * edge(z)); },
      [=](double z) {
        return (z > hi || z < lo) ? 0.0 : alpha * alpha * std::exp(-alpha * z);
      }};
}

}  // namespace test_functions

struct GeneratorResidual {
  double residual = 0.0;   // E_law[A f]
  double magnitude = 0.0;  // E_law[|drift term| + |diffusion term| + |jump term|]
};

// E_law[A f] for the jump-diffusion generator
//   A f = drift f' + sigma^2/2 f'' + lambda [f(edge) - f(z)] outside the band.
// Vanishes for every admissible f exactly when `law` is stationary.
inline GeneratorResidual generator_residual(const StationaryLaw& law,
                                            const MarketParams& params,
                                            const TestFunction& f) {
  const double drift = params.driftless() ? 0.0 : params.drift_z();
  const double half_var = 0.5 * params.sigma * params.sigma;
  const double f_hi = f.value(law.band_hi);
  const double f_lo = f.value(law.band_lo);
  auto parts = [&](double z) {
    std::array<double, 3> t{drift * f.first(z), half_var * f.second(z), 0.0};
    if (z > law.band_hi) t[2] = params.lambda * (f_hi - f.value(z));
    if (z < law.band_lo) t[2] = params.lambda * (f_lo - f.value(z));
    return t;
  };
  auto generator = [&](double z) {
    const auto t = parts(z);
    return t[0] + t[1] + t[2];
  };

  // Integrand tails must decay: compare |A f| e^{-u} far out in mapped units.
  auto check_tail = [&](double edge, double rate, double sign) {
    auto q = [&](double u) {
      return std::log(std::abs(generator(edge + sign * u / rate)) + 1e-300) - u;
    };
    const double slope = (q(80.0) - q(40.0)) / 40.0;
    if (!(slope < -1e-6)) {
      throw IntegrabilityError("test function " + f.name +
                               " grows at least as fast as the stationary tail");
    }
  };
  check_tail(law.band_hi, law.tail_rate_plus, 1.0);
  check_tail(law.band_lo, law.tail_rate_minus, -1.0);

  GeneratorResidual out;
  out.residual = expectation(law, generator);
  out.magnitude = expectation(law, [&](double z) {
    const auto t = parts(z);
    return std::abs(t[0]) + std::abs(t[1]) + std::abs(t[2]);
  }, 1e-8);
  return out;
}

}  // namespace cfmmarb
