#pragma once

#include <stdexcept>
#include <string>

namespace cfmmarb {

// Argument outside the mathematical domain of an operation (non-positive
// price, negative fee, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// The closed form being asked for only exists for the symmetric model
// (mu = sigma^2/2 and equal buy/sell fees).
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  explicit UnsupportedConfiguration(const std::string& what)
      : std::invalid_argument(what) {}
};

// Zero-width no-trade band: there is no three-segment density to build.
class DegenerateLaw : public std::domain_error {
 public:
  explicit DegenerateLaw(const std::string& what) : std::domain_error(what) {}
};

// An expectation under the stationary law does not converge.
class IntegrabilityError : public std::runtime_error {
 public:
  explicit IntegrabilityError(const std::string& what)
      : std::runtime_error(what) {}
};

namespace detail {

inline void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw DomainError(std::string(name) + " must be positive, got " +
                      std::to_string(value));
  }
}

inline void require_non_negative(double value, const char* name) {
  if (!(value >= 0.0)) {
    throw DomainError(std::string(name) + " must be non-negative, got " +
                      std::to_string(value));
  }
}

}  // namespace detail
}  // namespace cfmmarb
