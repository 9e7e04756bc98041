#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ginibeta {

// n >= 2 finite (x, y) pairs, x the response and y the explanatory variable.
// Stored as two columns.
class PairedSample {
 public:
  // Throws Error(invalid_parameter) on length mismatch, n < 2, or a
  // non-finite entry.
  PairedSample(std::vector<double> x, std::vector<double> y);

  std::size_t size() const noexcept { return x_.size(); }
  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> y() const noexcept { return y_; }
  // n minus the number of distinct y-values.
  std::size_t tie_count() const noexcept { return ties_; }

  bool operator==(const PairedSample&) const = default;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::size_t ties_ = 0;
};

// #{k : y_k <= y} / (n + 1).
double empirical_cdf(const PairedSample& sample, double y);

// Order statistics of y with their induced (concomitant) x-values.
struct SortedSample {
  std::vector<double> y_order;
  std::vector<double> x_induced;
  // permutation[k] = index in the original sample of the k-th smallest y
  std::vector<std::size_t> permutation;
  std::size_t tie_count = 0;

  // Inverse-permutes back to the original PairedSample.
  PairedSample restore() const;
};

// Stable sort by y; ties keep their original relative order.
SortedSample sort_induced(const PairedSample& sample);

// counts[k] = #{j : y_j <= y_k}, i.e. (n+1) * empirical_cdf(sample, y_k).
std::vector<std::uint32_t> le_counts(const PairedSample& sample);
std::vector<std::uint32_t> le_counts(std::span<const double> y);

}  // namespace ginibeta
