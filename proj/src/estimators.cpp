#include "ginibeta/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ginibeta/asymptotics.hpp"
#include "ginibeta/error.hpp"
#include "ginibeta/kernels.hpp"

namespace ginibeta {
namespace {

void require_spread(std::span<const double> y) {
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*lo == *hi) fail(ErrorKind::degenerate_sample, "all y-values are equal; the slope is undefined");
}

// Both slopes from centered cross moments of (x, y, w-scores).
BetaEstimates estimate_core(std::span<const double> x, std::span<const double> y, std::span<const double> wv,
                            const EstimatorOptions& opts) {
  require_spread(y);
  const double n = static_cast<double>(x.size());
  const double mx = kernels::sum(x) / n;
  const double my = kernels::sum(y) / n;
  const double mw = kernels::sum(wv) / n;
  const kernels::CrossMoments cm = kernels::cross_moments(x, y, wv, mx, my, mw);
  if (!(cm.syy > 0.0)) fail(ErrorKind::degenerate_sample, "zero variance of y");
  if (std::abs(cm.syw) <= opts.degenerate_rel_tol * std::sqrt(cm.syy * cm.sww))
    fail(ErrorKind::degenerate_weight,
         "weighted-Gini denominator is zero: the weight scores are uncorrelated with y");
  BetaEstimates e;
  e.beta_hat = cm.sxy / cm.syy;
  e.beta_g_hat = cm.sxw / cm.syw;
  e.delta_hat = e.beta_g_hat - e.beta_hat;
  e.z0_bar = mw;
  e.denom_classical = cm.syy / n;
  e.denom_gini = cm.syw / n;
  return e;
}

GiniBeta to_gini(const BetaEstimates& e) { return {e.beta_g_hat, e.z0_bar, e.denom_gini, e.used_fast_path}; }

}  // namespace

RankScores::RankScores(const WeightFunction& w, std::size_t n) : values_(n + 1, 0.0) {
  if (n < 1) fail(ErrorKind::invalid_parameter, "rank scores need n >= 1");
  const double denom = static_cast<double>(n + 1);
  for (std::size_t c = 1; c <= n; ++c) values_[c] = w(static_cast<double>(c) / denom);
}

double classical_beta(const PairedSample& sample) {
  require_spread(sample.y());
  const double n = static_cast<double>(sample.size());
  const double mx = kernels::sum(sample.x()) / n;
  const double my = kernels::sum(sample.y()) / n;
  const auto cm = kernels::cross_moments(sample.x(), sample.y(), sample.y(), mx, my, my);
  if (!(cm.syy > 0.0)) fail(ErrorKind::degenerate_sample, "zero variance of y");
  return cm.sxy / cm.syy;
}

BetaEstimates delta_hat_ranked(std::span<const double> x, std::span<const double> y,
                               std::span<const std::uint32_t> counts, const RankScores& scores,
                               const EstimatorOptions& opts) {
  if (x.size() != y.size() || x.size() != counts.size() || scores.n() != x.size())
    fail(ErrorKind::internal_inconsistency, "delta_hat_ranked: inconsistent lengths");
  std::vector<double> wv(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) wv[k] = scores.at(counts[k]);
  BetaEstimates e = estimate_core(x, y, wv, opts);
  e.used_fast_path = false;
  return e;
}

BetaEstimates delta_hat_sorted(std::span<const double> x_induced, std::span<const double> y_order,
                               const RankScores& scores, const EstimatorOptions& opts) {
  if (x_induced.size() != y_order.size() || scores.n() != x_induced.size())
    fail(ErrorKind::internal_inconsistency, "delta_hat_sorted: inconsistent lengths");
  BetaEstimates e = estimate_core(x_induced, y_order, scores.ordered(), opts);
  e.used_fast_path = true;
  return e;
}

GiniBeta gini_beta_general(const PairedSample& sample, const WeightFunction& w, const EstimatorOptions& opts) {
  const auto counts = le_counts(sample);
  const RankScores scores(w, sample.size());
  return to_gini(delta_hat_ranked(sample.x(), sample.y(), counts, scores, opts));
}

GiniBeta gini_beta_ordered(const SortedSample& sorted, const WeightFunction& w, const EstimatorOptions& opts) {
  if (sorted.tie_count != 0)
    fail(ErrorKind::invalid_parameter, "order-statistic form requires distinct y-values");
  const RankScores scores(w, sorted.y_order.size());
  return to_gini(delta_hat_sorted(sorted.x_induced, sorted.y_order, scores, opts));
}

GiniBeta gini_beta(const PairedSample& sample, const WeightFunction& w, const EstimatorOptions& opts) {
  if (sample.tie_count() == 0) return gini_beta_ordered(sort_induced(sample), w, opts);
  return gini_beta_general(sample, w, opts);
}

BetaEstimates delta_hat(const PairedSample& sample, const WeightFunction& w, const EstimatorOptions& opts) {
  const RankScores scores(w, sample.size());
  BetaEstimates e;
  if (sample.tie_count() == 0) {
    const SortedSample sorted = sort_induced(sample);
    e = delta_hat_sorted(sorted.x_induced, sorted.y_order, scores, opts);
  } else {
    e = delta_hat_ranked(sample.x(), sample.y(), le_counts(sample), scores, opts);
  }
  e.tie_count = sample.tie_count();
  return e;
}

PopulationBetas population_betas(const BivariateModel& model, const WeightFunction& w, const QuadratureSpec& quad) {
  const WeightIntegrals wi = compute_B_D_z0(model, w, quad);
  if (wi.degenerate)
    fail(ErrorKind::degenerate_weight, "B = Cov[Y, w(F_Y(Y))] is zero; the weighted-Gini beta is undefined");
  const auto breaks = quadrature_breaks(model, w);
  const double mx = model.mean_x;
  const double my = model.mean_y;
  const double cov = integrate_unit(
      [&](double t) {
        const double q = model.quantile(t);
        return (model.cond_mean(q) - mx) * (q - my);
      },
      breaks, quad, "Cov[X,Y]");
  const double a = integrate_unit(
      [&](double t) { return (model.cond_mean(model.quantile(t)) - mx) * (w(t) - wi.z0); }, breaks, quad,
      "Cov[X, w(F_Y(Y))]");
  PopulationBetas p;
  p.z0 = wi.z0;
  p.B = wi.B;
  p.D = wi.D;
  p.cov_xy = cov;
  p.beta = cov / wi.D;
  p.beta_g = a / wi.B;
  p.delta = p.beta_g - p.beta;
  return p;
}

double population_delta(const BivariateModel& model, const WeightFunction& w, const QuadratureSpec& quad) {
  return population_betas(model, w, quad).delta;
}

}  // namespace ginibeta
