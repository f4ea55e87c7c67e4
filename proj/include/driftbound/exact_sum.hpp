#pragma once

#include <vector>

namespace driftbound {

// Error-free running sum of doubles (Shewchuk partials, as in Python's
// math.fsum). value() is the correctly rounded exact sum, so the result does
// not depend on the order of add()/merge() calls.
class ExactSum {
 public:
  void add(double x);
  void merge(const ExactSum& other);
  double value() const;

  ExactSum& operator+=(double x) {
    add(x);
    return *this;
  }

 private:
  std::vector<double> partials_;
  double special_ = 0.0;  // accumulates inf/nan inputs
  bool has_special_ = false;
};

}  // namespace driftbound
