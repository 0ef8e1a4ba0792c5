#pragma once

#include <stdexcept>
#include <string>

namespace fbmlab {

// Hurst index, constrained to the open interval (0,1).
class Hurst {
 public:
  explicit Hurst(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0)) {
      throw std::invalid_argument("Hurst index must lie in (0,1), got " +
                                  std::to_string(value));
    }
  }

  double value() const { return value_; }
  double bar() const { return 1.0 - value_; }  // H-bar = 1 - H
  double two() const { return 2.0 * value_; }

 private:
  double value_;
};

}  // namespace fbmlab
