#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ginibeta/empirical.hpp"
#include "ginibeta/model.hpp"
#include "ginibeta/quadrature.hpp"
#include "ginibeta/weights.hpp"

namespace ginibeta {

struct BetaEstimates {
  double beta_hat = 0.0;
  double beta_g_hat = 0.0;
  double delta_hat = 0.0;         // beta_g_hat - beta_hat
  double z0_bar = 0.0;            // mean of w(F_hat(y_k))
  double denom_classical = 0.0;   // sum (y - ybar)^2 / n
  double denom_gini = 0.0;        // sum (y - ybar)(w - z0_bar) / n
  bool used_fast_path = false;
  std::size_t tie_count = 0;
};

struct EstimatorOptions {
  // |denom_gini| <= tol * sqrt(var(y) var(w)) counts as a zero denominator.
  double degenerate_rel_tol = 1e-12;
};

// Table of w(c/(n+1)) for c = 1..n (index 0 unused).
class RankScores {
 public:
  RankScores(const WeightFunction& w, std::size_t n);
  std::size_t n() const noexcept { return values_.size() - 1; }
  double at(std::uint32_t count) const noexcept { return values_[count]; }
  // w(1/(n+1)), ..., w(n/(n+1))
  std::span<const double> ordered() const noexcept { return std::span(values_).subspan(1); }

 private:
  std::vector<double> values_;
};

// Least-squares slope of x on y.
double classical_beta(const PairedSample& sample);

struct GiniBeta {
  double beta_g = 0.0;
  double z0_bar = 0.0;
  double denom = 0.0;  // estimate of B = Cov[Y, w(F_Y(Y))]
  bool used_fast_path = false;
};

// Weighted-Gini slope. Uses the order-statistic form when y has no ties and
// the general empirical-cdf form otherwise.
GiniBeta gini_beta(const PairedSample& sample, const WeightFunction& w, const EstimatorOptions& opts = {});
// General form: w evaluated at the (n+1)-denominator empirical cdf of each
// y_k, sums taken in the original observation order. Valid with ties.
GiniBeta gini_beta_general(const PairedSample& sample, const WeightFunction& w, const EstimatorOptions& opts = {});
// Order-statistic form with scores w(k/(n+1)) against the induced x-values.
// Requires a tie-free sample.
GiniBeta gini_beta_ordered(const SortedSample& sorted, const WeightFunction& w, const EstimatorOptions& opts = {});

BetaEstimates delta_hat(const PairedSample& sample, const WeightFunction& w, const EstimatorOptions& opts = {});

// Lower-level entry points for resampling loops: the caller supplies the
// <=-counts of each y (general form) or an already sorted tie-free sample
// (order-statistic form) together with a precomputed score table of size n.
BetaEstimates delta_hat_ranked(std::span<const double> x, std::span<const double> y,
                               std::span<const std::uint32_t> counts, const RankScores& scores,
                               const EstimatorOptions& opts = {});
BetaEstimates delta_hat_sorted(std::span<const double> x_induced, std::span<const double> y_order,
                               const RankScores& scores, const EstimatorOptions& opts = {});

struct PopulationBetas {
  double beta = 0.0;
  double beta_g = 0.0;
  double delta = 0.0;
  double z0 = 0.0;
  double B = 0.0;
  double D = 0.0;
  double cov_xy = 0.0;
};

// Population betas of a model by quadrature over the quantile scale.
PopulationBetas population_betas(const BivariateModel& model, const WeightFunction& w,
                                 const QuadratureSpec& quad = {});
double population_delta(const BivariateModel& model, const WeightFunction& w, const QuadratureSpec& quad = {});

}  // namespace ginibeta
