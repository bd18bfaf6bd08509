#pragma once

#include <cmath>

namespace cocyclelab {

// Neumaier-compensated accumulator. Used for every reduction whose result
// must not depend on chunking (phase averages, accumulated log norms).
class KahanSum {
public:
  void add(double x) noexcept {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

} // namespace cocyclelab
