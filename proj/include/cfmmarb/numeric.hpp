#pragma once

#include <cmath>

namespace cfmmarb::numeric {

// e^a - 1 - a without cancellation. Non-negative for every real a.
inline double expm1_minus_linear(double a) {
  if (std::abs(a) < 0.125) {
    // a^2/2! + a^3/3! + ... ; 18 terms is well past double precision at |a| < 1/8.
    double term = a * a / 2.0;
    double sum = term;
    for (int k = 3; k < 20; ++k) {
      term *= a / k;
      sum += term;
    }
    return sum;
  }
  return std::expm1(a) - a;
}

// (e^a - 1) / a, continuous at a = 0.
inline double expm1_ratio(double a) {
  if (std::abs(a) < 1e-150) return 1.0 + a / 2.0;
  return std::expm1(a) / a;
}

// (e^a - 1 - a) / a^2, continuous at a = 0.
inline double expm1_minus_linear_ratio(double a) {
  if (std::abs(a) < 1e-100) return 0.5 + a / 6.0;
  return expm1_minus_linear(a) / (a * a);
}

inline double sinhc(double a) {
  if (std::abs(a) < 1e-150) return 1.0;
  return std::sinh(a) / a;
}

}  // namespace cfmmarb::numeric
