#pragma once

#include <stdexcept>
#include <string>

namespace soliton {

/// Dimension n of the spatial slice R^n. Always >= 1.
class Dimension {
 public:
  explicit Dimension(int n) : n_(n) {
    if (n < 1) {
      throw std::invalid_argument("dimension must be >= 1, got " + std::to_string(n));
    }
  }

  int value() const noexcept { return n_; }
  double as_double() const noexcept { return static_cast<double>(n_); }

  friend bool operator==(Dimension, Dimension) = default;

 private:
  int n_;
};

}  // namespace soliton
