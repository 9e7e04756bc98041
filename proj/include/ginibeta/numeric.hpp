#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ginibeta {

double normal_cdf(double x);
// Inverse of the standard normal cdf on (0,1).
double normal_quantile(double p);

// Neumaier-compensated running sum; order of additions still matters but the
// result is accurate to about one ulp of the exact sum for typical inputs.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double mean(std::span<const double> v);
// Unbiased sample variance (divisor n-1).
double sample_variance(std::span<const double> v);
double median(std::vector<double> v);

// Linear-interpolation sample quantile (Hyndman-Fan type 7) of sorted data.
double quantile_sorted(std::span<const double> sorted, double prob);

// sup_x |F_n(x) - Phi(x)| for the empirical cdf of the given values.
double kolmogorov_distance_normal(std::vector<double> values);

}  // namespace ginibeta
