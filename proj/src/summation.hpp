#pragma once

#include <cmath>

namespace grenfun::detail {

// Neumaier compensated summation.
class CompensatedSum
{
public:
  void add(double v)
  {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      carry_ += (sum_ - t) + v;
    else
      carry_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

} // namespace grenfun::detail
