#pragma once

#include <cmath>
#include <compare>
#include <string>

#include "l2yield/errors.hpp"

namespace l2yield {

namespace detail {
inline double checked_non_negative(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw DomainError(std::string(what) + " must be finite and non-negative, got " + std::to_string(v));
  }
  return v;
}
}  // namespace detail

/// Yearly rate expressed as a fraction (0.0347 is 3.47%/yr).
class Rate {
 public:
  constexpr Rate() = default;
  explicit Rate(double value) : value_(detail::checked_non_negative(value, "rate")) {}

  constexpr double value() const noexcept { return value_; }
  double percent() const noexcept { return value_ * 100.0; }

  friend constexpr auto operator<=>(const Rate&, const Rate&) = default;

 private:
  double value_ = 0.0;
};

/// Non-negative USD amount.
class Money {
 public:
  constexpr Money() = default;
  explicit Money(double value) : value_(detail::checked_non_negative(value, "money amount")) {}

  constexpr double value() const noexcept { return value_; }

  friend constexpr auto operator<=>(const Money&, const Money&) = default;

 private:
  double value_ = 0.0;
};

}  // namespace l2yield
