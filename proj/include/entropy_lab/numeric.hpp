#pragma once

#include <cmath>

namespace entropy_lab {

// Neumaier's variant of Kahan summation. Handles terms larger than the
// running sum, which happens when a spike of mass ~1 follows tiny pieces.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log(exp(a) - exp(b)) for a >= b.
inline double log_diff_exp(double a, double b) noexcept {
  if (b == -INFINITY) return a;
  return a + std::log(-std::expm1(b - a));
}

}  // namespace entropy_lab
