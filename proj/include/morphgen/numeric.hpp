#pragma once

#include <cmath>
#include <span>

namespace morphgen {

// Neumaier compensated summation: error stays O(eps) independent of the
// number of terms, which keeps probability sums inside the 1e-12 contracts
// even for multi-million-term enumerations.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
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

inline double neumaier_sum(std::span<const double> xs) {
  NeumaierSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace morphgen
