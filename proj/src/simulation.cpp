#include "ginibeta/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ginibeta/error.hpp"
#include "ginibeta/estimators.hpp"
#include "ginibeta/numeric.hpp"
#include "ginibeta/parallel.hpp"
#include "ginibeta/rng.hpp"

namespace ginibeta {
namespace {

constexpr double kMaxFailureRate = 0.01;
constexpr double kKsCoefficient = 1.63;  // 1% critical value of sqrt(R) * KS distance

bool wants(const std::vector<Check>& checks, Check c) {
  return std::find(checks.begin(), checks.end(), c) != checks.end();
}

struct Replicate {
  double delta_hat = std::numeric_limits<double>::quiet_NaN();
  bool covered = false;
  bool rejected = false;
  std::size_t boot_failures = 0;
};

}  // namespace

std::string_view check_name(Check c) noexcept {
  switch (c) {
    case Check::consistency: return "consistency";
    case Check::normality: return "normality";
    case Check::variance_match: return "variance_match";
    case Check::coverage: return "coverage";
    case Check::size: return "size";
    case Check::power: return "power";
  }
  return "unknown";
}

Check parse_check(std::string_view s) {
  for (Check c : {Check::consistency, Check::normality, Check::variance_match, Check::coverage, Check::size,
                  Check::power})
    if (check_name(c) == s) return c;
  fail(ErrorKind::invalid_parameter, "unknown Monte Carlo check '" + std::string(s) + "'");
}

void MonteCarloPlan::validate() const {
  if (replications < 100) fail(ErrorKind::invalid_parameter, "Monte Carlo replications must be at least 100");
  if (sample_sizes.empty()) fail(ErrorKind::invalid_parameter, "Monte Carlo plan needs at least one sample size");
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    if (sample_sizes[i] < 2) fail(ErrorKind::invalid_parameter, "Monte Carlo sample sizes must be at least 2");
    if (i > 0 && sample_sizes[i] <= sample_sizes[i - 1])
      fail(ErrorKind::invalid_parameter, "Monte Carlo sample sizes must be strictly increasing");
  }
  if (!model.draw || !model.quantile || !model.cond_mean || !model.cond_var)
    fail(ErrorKind::invalid_parameter, "Monte Carlo plan needs a fully specified model");
  quad.validate();
  const bool needs_boot = wants(checks, Check::coverage) || wants(checks, Check::size) || wants(checks, Check::power);
  if (needs_boot)
    for (std::size_t n : sample_sizes) bootstrap.validate(n);
}

MonteCarloResult run_plan(const MonteCarloPlan& plan) {
  plan.validate();
  MonteCarloResult res;
  res.model = plan.model.name;
  res.weight = plan.w.describe();
  res.checks = plan.checks;

  try {
    res.delta = population_delta(plan.model, plan.w, plan.quad);
  } catch (const Error& e) {
    fail(e.kind(), std::string("population oracle failed: ") + e.what());
  }
  const bool need_var = wants(plan.checks, Check::normality) || wants(plan.checks, Check::variance_match);
  if (need_var) {
    try {
      res.variance = asymptotic_variance(plan.model, plan.w, plan.quad);
    } catch (const Error& e) {
      fail(e.kind(), std::string("variance oracle failed: ") + e.what());
    }
    for (const auto& wmsg : res.variance->warnings) res.notes.push_back(wmsg);
  }
  const bool need_boot =
      wants(plan.checks, Check::coverage) || wants(plan.checks, Check::size) || wants(plan.checks, Check::power);

  const std::size_t R = plan.replications;
  for (std::size_t n : plan.sample_sizes) {
    const RankScores scores(plan.w, n);
    std::vector<Replicate> reps(R);
    parallel_for(R, [&](std::size_t r) {
      CounterStream stream(plan.seed, n, r);
      const PairedSample s = plan.model.sample(stream, n);
      Replicate& out = reps[r];
      try {
        if (s.tie_count() == 0) {
          const SortedSample sorted = sort_induced(s);
          out.delta_hat = delta_hat_sorted(sorted.x_induced, sorted.y_order, scores).delta_hat;
        } else {
          out.delta_hat = delta_hat_ranked(s.x(), s.y(), le_counts(s), scores).delta_hat;
        }
        if (need_boot) {
          BootstrapSpec bs = plan.bootstrap;
          bs.parallel = false;
          bs.seed = mix64(plan.seed ^ mix64(n * 0x9e3779b97f4a7c15ULL + r));
          const InferenceReport ir = bootstrap_delta(s, plan.w, bs);
          out.covered = ir.ci_low <= res.delta && res.delta <= ir.ci_high;
          out.rejected = ir.reject_h0_delta_zero;
          out.boot_failures = ir.bootstrap_failures;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::degenerate_sample && e.kind() != ErrorKind::degenerate_weight &&
            e.kind() != ErrorKind::unstable_bootstrap)
          throw;
        out.delta_hat = std::numeric_limits<double>::quiet_NaN();
      }
    });

    SampleSizeSummary sum;
    sum.n = n;
    std::vector<double> d;
    d.reserve(R);
    std::size_t covered = 0, rejected = 0;
    for (const Replicate& rp : reps) {
      if (std::isnan(rp.delta_hat)) continue;
      d.push_back(rp.delta_hat);
      covered += rp.covered ? 1 : 0;
      rejected += rp.rejected ? 1 : 0;
      sum.bootstrap_failures += rp.boot_failures;
    }
    sum.failures = R - d.size();
    sum.replications = d.size();
    if (static_cast<double>(sum.failures) > kMaxFailureRate * static_cast<double>(R))
      fail(ErrorKind::numeric_quality, "Monte Carlo aborted at n=" + std::to_string(n) + ": " +
                                           std::to_string(sum.failures) + " of " + std::to_string(R) +
                                           " replicates failed (more than 1%)");
    const double rn = std::sqrt(static_cast<double>(n));
    const double cnt = static_cast<double>(d.size());
    CompensatedSum s1, s2;
    std::vector<double> scaled(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double e = d[i] - res.delta;
      s1.add(d[i]);
      s2.add(e * e);
      scaled[i] = rn * e;
    }
    sum.mean_delta_hat = s1.value() / cnt;
    sum.bias = sum.mean_delta_hat - res.delta;
    sum.median_bias = median(d) - res.delta;
    sum.rmse = std::sqrt(s2.value() / cnt);
    sum.var_scaled = d.size() >= 2 ? sample_variance(scaled) : 0.0;
    if (res.variance) {
      const double total = res.variance->total();
      if (total > 0.0) {
        sum.variance_ratio = sum.var_scaled / total;
        std::vector<double> z(scaled.size());
        const double sd = std::sqrt(total);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = scaled[i] / sd;
        sum.ks_distance = kolmogorov_distance_normal(std::move(z));
      } else {
        // Zero asymptotic variance: the checks hold exactly when every
        // replicate sits on the population value.
        const double spread = *std::max_element(scaled.begin(), scaled.end()) -
                              *std::min_element(scaled.begin(), scaled.end());
        const bool exact = spread <= 1e-8 && std::abs(sum.bias) <= 1e-10;
        sum.variance_ratio = exact ? 1.0 : std::numeric_limits<double>::infinity();
        sum.ks_distance = exact ? 0.0 : 1.0;
        res.notes.push_back("zero asymptotic variance at n=" + std::to_string(n) +
                            (exact ? ": all replicates equal the population delta" : ": replicates are not degenerate"));
      }
      sum.ks_critical = kKsCoefficient / std::sqrt(cnt);
    }
    if (need_boot) {
      sum.coverage = static_cast<double>(covered) / cnt;
      sum.rejection_rate = static_cast<double>(rejected) / cnt;
    }
    if (plan.keep_replicates) sum.replicates = d;
    res.per_n.push_back(std::move(sum));
  }
  if (wants(plan.checks, Check::consistency) && res.per_n.size() >= 2) {
    bool dec = true;
    for (std::size_t i = 1; i < res.per_n.size(); ++i) dec = dec && res.per_n[i].rmse < res.per_n[i - 1].rmse;
    res.rmse_decreasing = dec;
  }
  return res;
}

}  // namespace ginibeta
