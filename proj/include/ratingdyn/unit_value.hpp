#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "ratingdyn/errors.hpp"

namespace ratingdyn {

// A real number in [0, 1]: latent ratings, observed averages, expressed
// ratings and influence weights all live here.
class UnitValue {
 public:
  constexpr UnitValue() = default;

  explicit UnitValue(double v) : value_(v) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("unit value out of [0,1]: " + std::to_string(v));
    }
  }

  // Clamp after floating-point rounding; NaN is still rejected.
  static UnitValue clamped(double v) {
    if (std::isnan(v)) throw DomainError("unit value is NaN");
    return UnitValue(std::clamp(v, 0.0, 1.0));
  }

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }

  friend constexpr bool operator==(UnitValue a, UnitValue b) noexcept {
    return a.value_ == b.value_;
  }

 private:
  double value_ = 0.0;
};

}  // namespace ratingdyn
