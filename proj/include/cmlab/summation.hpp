#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace cmlab {

/// Neumaier's variant of Kahan summation. Order-dependent but deterministic:
/// feeding the same values in the same order always gives the same bits.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

/// Fixed-shape pairwise reduction; the tree depends only on the length.
inline double pairwise_sum(std::span<const double> values) noexcept {
  const std::size_t n = values.size();
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace cmlab
