#include "ginibeta/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ginibeta/error.hpp"
#include "ginibeta/numeric.hpp"
#include "ginibeta/parallel.hpp"
#include "ginibeta/rng.hpp"

namespace ginibeta {
namespace {

// Third stream coordinate reserved for bootstrap index draws.
constexpr std::uint64_t kBootstrapDomain = 0xb0075u;
constexpr double kMaxFailureRate = 0.05;

// Ranks of the original y-values: group[k] is the index of y_k among the
// sorted distinct values, so <=-counts of any resample follow from a
// histogram over groups.
struct GroupIndex {
  std::vector<std::uint32_t> group;
  std::size_t groups = 0;
};

GroupIndex group_y(std::span<const double> y) {
  std::vector<std::size_t> order(y.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
  GroupIndex g;
  g.group.resize(y.size());
  std::uint32_t id = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && y[order[k]] != y[order[k - 1]]) ++id;
    g.group[order[k]] = id;
  }
  g.groups = y.empty() ? 0 : id + 1;
  return g;
}

}  // namespace

std::string_view scheme_name(BootstrapScheme s) noexcept {
  return s == BootstrapScheme::naive ? "naive" : "m_out_of_n";
}

std::string_view ci_method_name(CiMethod m) noexcept { return m == CiMethod::percentile ? "percentile" : "basic"; }

BootstrapScheme parse_scheme(std::string_view s) {
  if (s == "naive") return BootstrapScheme::naive;
  if (s == "m_out_of_n" || s == "m-out-of-n") return BootstrapScheme::m_out_of_n;
  fail(ErrorKind::invalid_parameter, "unknown bootstrap scheme '" + std::string(s) + "' (naive | m_out_of_n)");
}

CiMethod parse_ci_method(std::string_view s) {
  if (s == "percentile") return CiMethod::percentile;
  if (s == "basic") return CiMethod::basic;
  fail(ErrorKind::invalid_parameter, "unknown CI method '" + std::string(s) + "' (percentile | basic)");
}

void BootstrapSpec::validate(std::size_t n) const {
  if (replicates < 100) fail(ErrorKind::invalid_parameter, "bootstrap replicates must be at least 100");
  if (!(level > 0.0 && level < 1.0)) fail(ErrorKind::invalid_parameter, "confidence level must lie in (0,1)");
  if (scheme == BootstrapScheme::naive && m)
    fail(ErrorKind::invalid_parameter, "m is only meaningful for the m_out_of_n scheme");
  if (scheme == BootstrapScheme::m_out_of_n) {
    const std::size_t mm = resample_size(n);
    if (mm < 2 || mm >= n)
      fail(ErrorKind::invalid_parameter,
           "m_out_of_n needs 2 <= m < n (m=" + std::to_string(mm) + ", n=" + std::to_string(n) + ")");
  }
}

std::size_t BootstrapSpec::resample_size(std::size_t n) const {
  if (scheme == BootstrapScheme::naive) return n;
  if (m) return *m;
  return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0) - 1e-9));
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::size_t size, std::uint64_t seed, std::size_t index) {
  CounterStream stream(seed, index, kBootstrapDomain);
  std::vector<std::size_t> idx(size);
  for (auto& i : idx) i = static_cast<std::size_t>(stream.below(n));
  return idx;
}

InferenceReport bootstrap_delta(const PairedSample& sample, const WeightFunction& w, const BootstrapSpec& spec) {
  const std::size_t n = sample.size();
  spec.validate(n);
  InferenceReport rep;
  rep.point = delta_hat(sample, w);
  rep.spec_echo = spec;
  const std::size_t m = spec.resample_size(n);
  rep.m_used = m;

  const GroupIndex groups = group_y(sample.y());
  const RankScores scores(w, m);
  const auto xs = sample.x();
  const auto ys = sample.y();
  std::vector<double> deltas(spec.replicates, std::numeric_limits<double>::quiet_NaN());

  auto one = [&](std::size_t b) {
    const auto idx = bootstrap_indices(n, m, spec.seed, b);
    std::vector<std::uint32_t> hist(groups.groups + 1, 0);
    bool tied = false;
    for (std::size_t i : idx) {
      const std::uint32_t g = groups.group[i];
      tied = tied || hist[g + 1] > 0;
      ++hist[g + 1];
    }
    for (std::size_t g = 1; g <= groups.groups; ++g) hist[g] += hist[g - 1];
    std::vector<double> x(m), y(m);
    std::vector<std::uint32_t> counts(m);
    for (std::size_t k = 0; k < m; ++k) {
      x[k] = xs[idx[k]];
      y[k] = ys[idx[k]];
      counts[k] = hist[groups.group[idx[k]] + 1];
    }
    try {
      if (tied) {
        deltas[b] = delta_hat_ranked(x, y, counts, scores).delta_hat;
      } else {
        // A tie-free resample takes the order-statistic path, exactly as
        // delta_hat() would.
        deltas[b] = delta_hat(PairedSample(std::move(x), std::move(y)), w).delta_hat;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::degenerate_sample && e.kind() != ErrorKind::degenerate_weight) throw;
    }
  };
  if (spec.parallel) {
    parallel_for(spec.replicates, one);
  } else {
    for (std::size_t b = 0; b < spec.replicates; ++b) one(b);
  }

  std::vector<double> ok;
  ok.reserve(deltas.size());
  for (double d : deltas)
    if (!std::isnan(d)) ok.push_back(d);
  rep.bootstrap_failures = deltas.size() - ok.size();
  if (static_cast<double>(rep.bootstrap_failures) > kMaxFailureRate * static_cast<double>(spec.replicates))
    fail(ErrorKind::unstable_bootstrap, std::to_string(rep.bootstrap_failures) + " of " +
                                            std::to_string(spec.replicates) +
                                            " resamples were degenerate (more than 5%)");
  rep.resample_sd = std::sqrt(sample_variance(ok));
  std::sort(ok.begin(), ok.end());
  const double alpha = 1.0 - spec.level;
  const double q_lo = quantile_sorted(ok, 0.5 * alpha);
  const double q_hi = quantile_sorted(ok, 1.0 - 0.5 * alpha);
  const double theta = rep.point.delta_hat;
  if (spec.ci_method == CiMethod::percentile) {
    rep.ci_low = q_lo;
    rep.ci_high = q_hi;
    if (spec.scheme == BootstrapScheme::m_out_of_n) {
      rep.unscaled_interval = true;
      rep.interval_note = "m-out-of-n percentile interval reported without sqrt(m/n) rescaling";
    } else {
      rep.interval_note = "percentile interval";
    }
  } else {
    const double scale =
        spec.scheme == BootstrapScheme::m_out_of_n ? std::sqrt(static_cast<double>(m) / static_cast<double>(n)) : 1.0;
    rep.ci_low = theta - scale * (q_hi - theta);
    rep.ci_high = theta - scale * (q_lo - theta);
    rep.interval_note = spec.scheme == BootstrapScheme::m_out_of_n
                            ? "basic interval with resample deviations scaled by sqrt(m/n)"
                            : "basic interval";
  }
  rep.reject_h0_delta_zero = !(rep.ci_low <= 0.0 && 0.0 <= rep.ci_high);
  rep.resample_deltas = std::move(deltas);
  return rep;
}

DeltaZeroTest test_delta_zero(const PairedSample& sample, const WeightFunction& w, const BootstrapSpec& spec) {
  const InferenceReport r = bootstrap_delta(sample, w, spec);
  return {r.reject_h0_delta_zero, r.ci_low, r.ci_high};
}

}  // namespace ginibeta
