#include "ginibeta/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ginibeta/error.hpp"

namespace ginibeta {
namespace {

std::size_t count_ties(std::vector<double> y) {
  std::sort(y.begin(), y.end());
  return static_cast<std::size_t>(y.end() - std::unique(y.begin(), y.end()));
}

}  // namespace

PairedSample::PairedSample(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) fail(ErrorKind::invalid_parameter, "x and y columns differ in length");
  if (x_.size() < 2) fail(ErrorKind::invalid_parameter, "a paired sample needs at least 2 observations");
  if (x_.size() > 0xFFFFFFFEu) fail(ErrorKind::invalid_parameter, "sample too large");
  for (std::size_t k = 0; k < x_.size(); ++k)
    if (!std::isfinite(x_[k]) || !std::isfinite(y_[k]))
      fail(ErrorKind::invalid_parameter, "non-finite value in observation " + std::to_string(k + 1));
  ties_ = count_ties(y_);
}

double empirical_cdf(const PairedSample& sample, double y) {
  const auto ys = sample.y();
  const auto count = std::count_if(ys.begin(), ys.end(), [y](double v) { return v <= y; });
  return static_cast<double>(count) / static_cast<double>(sample.size() + 1);
}

SortedSample sort_induced(const PairedSample& sample) {
  const std::size_t n = sample.size();
  const auto xs = sample.x();
  const auto ys = sample.y();
  SortedSample out;
  out.permutation.resize(n);
  std::iota(out.permutation.begin(), out.permutation.end(), std::size_t{0});
  std::stable_sort(out.permutation.begin(), out.permutation.end(),
                   [&](std::size_t a, std::size_t b) { return ys[a] < ys[b]; });
  out.y_order.resize(n);
  out.x_induced.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.y_order[k] = ys[out.permutation[k]];
    out.x_induced[k] = xs[out.permutation[k]];
  }
  out.tie_count = sample.tie_count();
  return out;
}

PairedSample SortedSample::restore() const {
  const std::size_t n = permutation.size();
  std::vector<double> x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[permutation[k]] = x_induced[k];
    y[permutation[k]] = y_order[k];
  }
  return PairedSample(std::move(x), std::move(y));
}

std::vector<std::uint32_t> le_counts(std::span<const double> y) {
  const std::size_t n = y.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return y[a] < y[b]; });
  std::vector<std::uint32_t> counts(n);
  // walk tie groups; every member gets the group's last (1-based) position
  std::size_t k = 0;
  while (k < n) {
    std::size_t end = k + 1;
    while (end < n && y[order[end]] == y[order[k]]) ++end;
    for (std::size_t j = k; j < end; ++j) counts[order[j]] = static_cast<std::uint32_t>(end);
    k = end;
  }
  return counts;
}

std::vector<std::uint32_t> le_counts(const PairedSample& sample) { return le_counts(sample.y()); }

}  // namespace ginibeta
