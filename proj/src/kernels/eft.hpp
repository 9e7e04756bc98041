#pragma once

// Error-free transformations shared by the scalar kernels and the lane
// reductions of the vector kernels.

#include <cmath>

namespace ginibeta::kernels::detail {

// Knuth TwoSum: a + b = s + e exactly.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bp = s - a;
  e = (a - (s - bp)) + (b - bp);
}

struct CompensatedAccumulator {
  double s = 0.0;
  double c = 0.0;

  void add(double v) {
    double e;
    two_sum(s, v, s, e);
    c += e;
  }
  void add_product(double a, double b) {
    const double p = a * b;
    const double lo = std::fma(a, b, -p);
    add(p);
    c += lo;
  }
  void merge(const CompensatedAccumulator& o) {
    add(o.s);
    c += o.c;
  }
  double value() const { return s + c; }
};

}  // namespace ginibeta::kernels::detail
