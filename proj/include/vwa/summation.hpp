#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace vwa {

// Neumaier's compensated summation. All reductions in this library run
// through this accumulator in index order, so results do not depend on
// evaluation order or thread count.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_total(const std::vector<double>& xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

// Two-pass sample variance with denominator n-1.
inline double sample_variance(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  const double mean = compensated_total(xs) / static_cast<double>(n);
  CompensatedSum ss;
  for (double x : xs) {
    const double d = x - mean;
    ss.add(d * d);
  }
  return ss.value() / static_cast<double>(n - 1);
}

}  // namespace vwa
