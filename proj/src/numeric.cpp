#include "ginibeta/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "ginibeta/error.hpp"
#include "ginibeta/kernels.hpp"

namespace ginibeta {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    fail(ErrorKind::invalid_parameter, "normal_quantile: probability must lie in (0,1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v))
    comp_ += (sum_ - t) + v;
  else
    comp_ += (v - t) + sum_;
  sum_ = t;
}

double mean(std::span<const double> v) {
  if (v.empty()) fail(ErrorKind::invalid_parameter, "mean of empty range");
  return kernels::sum(v) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) fail(ErrorKind::invalid_parameter, "variance needs at least two values");
  const double m = mean(v);
  const std::vector<double> zeros(v.size(), 0.0);
  const auto cm = kernels::cross_moments(v, v, zeros, m, m, 0.0);
  return cm.syy / static_cast<double>(v.size() - 1);
}

double median(std::vector<double> v) {
  if (v.empty()) fail(ErrorKind::invalid_parameter, "median of empty range");
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 0.5);
}

double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) fail(ErrorKind::invalid_parameter, "quantile of empty range");
  if (!(prob >= 0.0 && prob <= 1.0)) fail(ErrorKind::invalid_parameter, "quantile level outside [0,1]");
  const double h = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double kolmogorov_distance_normal(std::vector<double> values) {
  if (values.empty()) fail(ErrorKind::invalid_parameter, "Kolmogorov distance of empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = normal_cdf(values[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

}  // namespace ginibeta

#include <cstdlib>
#include <string>
#include <thread>

#include "ginibeta/parallel.hpp"
#include "ginibeta/rng.hpp"

namespace ginibeta {

double CounterStream::normal() { return normal_quantile(uniform()); }

std::size_t worker_count() {
  if (const char* env = std::getenv("GINIBETA_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace ginibeta
