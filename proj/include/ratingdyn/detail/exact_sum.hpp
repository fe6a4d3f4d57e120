#pragma once

#include <cmath>
#include <vector>

namespace ratingdyn::detail {

// Shewchuk's non-overlapping partials; value() is the correctly rounded
// sum, hence independent of the order of the added terms.
class ExactSum {
 public:
  void add(double x) {
    std::size_t i = 0;
    for (double y : partials_) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
  }

  double value() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      lo = y - (hi - x);
      if (lo != 0.0) break;
    }
    // Round half to even across the remaining partials.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

  // sum / d from the exact sum: one rounded quotient plus one correction
  // by the exactly computed remainder. Depends only on the exact sum.
  double divided_by(double d) const {
    const double q = value() / d;
    const double p = q * d;
    ExactSum rest = *this;
    rest.add(-p);
    rest.add(-std::fma(q, d, -p));
    return q + rest.value() / d;
  }

 private:
  std::vector<double> partials_;
};

}  // namespace ratingdyn::detail
