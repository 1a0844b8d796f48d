#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace cfmmarb::quadrature {

// Nodes and weights for integrals of the form  int_0^inf f(u) e^{-u} du.
struct LaguerreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Newton iteration on L_n with the classical asymptotic starting guesses.
inline LaguerreRule build_laguerre_rule(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Gauss-Laguerre rule needs n >= 1");
  LaguerreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  std::vector<long double> x(n);
  const long double nn = static_cast<long double>(n);
  long double z = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0L / (1.0L + 2.4L * nn);
    } else if (i == 1) {
      z += 15.0L / (1.0L + 2.5L * nn);
    } else {
      const long double ai = static_cast<long double>(i - 1);
      z += ((1.0L + 2.55L * ai) / (1.9L * ai)) * (z - x[i - 2]);
    }
    long double p1 = 1.0L, p2 = 0.0L, pp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      p1 = 1.0L;
      p2 = 0.0L;
      for (std::size_t j = 1; j <= n; ++j) {
        const long double p3 = p2;
        p2 = p1;
        const long double jj = static_cast<long double>(j);
        p1 = ((2.0L * jj - 1.0L - z) * p2 - (jj - 1.0L) * p3) / jj;
      }
      pp = (nn * p1 - nn * p2) / z;
      const long double step = p1 / pp;
      z -= step;
      if (std::fabs(step) <= 1e-17L * std::fabs(z)) break;
    }
    x[i] = z;
    rule.nodes[i] = static_cast<double>(z);
    rule.weights[i] = static_cast<double>(-1.0L / (pp * nn * p2));
  }
  return rule;
}

}  // namespace detail

// Rules are built once per order and shared.
inline const LaguerreRule& laguerre_rule(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, LaguerreRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, detail::build_laguerre_rule(n)).first;
  }
  return it->second;
}

// int_0^inf f(u) e^{-u} du with an n-point Gauss-Laguerre rule.
template <class F>
double gauss_laguerre(F&& f, std::size_t n) {
  const LaguerreRule& rule = laguerre_rule(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    if (rule.weights[i] == 0.0) continue;
    sum += rule.weights[i] * f(rule.nodes[i]);
  }
  return sum;
}

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Adaptive 61-point Gauss-Kronrod; either bound may be infinite. The
// tolerance is relative to the L1 norm of f, so integrals that cancel to
// (nearly) zero still terminate.
template <class F>
AdaptiveResult integrate_adaptive(F&& f, double a, double b,
                                  double rel_tol = 1e-13,
                                  unsigned max_depth = 15) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  AdaptiveResult out;
  double l1 = 0.0;
  const double first = GK::integrate(f, a, b, 0, rel_tol, &out.error_estimate, &l1);
  if (first == 0.0 || out.error_estimate <= rel_tol * l1) {
    out.value = first;
    return out;
  }
  const double tol = rel_tol * l1 / std::abs(first);
  out.value = GK::integrate(f, a, b, max_depth, tol, &out.error_estimate, &l1);
  return out;
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace cfmmarb::quadrature
