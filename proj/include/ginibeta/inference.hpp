#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ginibeta/empirical.hpp"
#include "ginibeta/estimators.hpp"
#include "ginibeta/weights.hpp"

namespace ginibeta {

enum class BootstrapScheme { naive, m_out_of_n };
enum class CiMethod { percentile, basic };

std::string_view scheme_name(BootstrapScheme s) noexcept;
std::string_view ci_method_name(CiMethod m) noexcept;
BootstrapScheme parse_scheme(std::string_view s);   // "naive" | "m_out_of_n" (also "m-out-of-n")
CiMethod parse_ci_method(std::string_view s);       // "percentile" | "basic"

struct BootstrapSpec {
  std::size_t replicates = 2000;
  BootstrapScheme scheme = BootstrapScheme::naive;
  std::optional<std::size_t> m;  // m_out_of_n only; default ceil(n^(2/3))
  double level = 0.95;
  CiMethod ci_method = CiMethod::percentile;
  std::uint64_t seed = 0;
  // Resamples run on worker threads; results do not depend on this.
  bool parallel = true;

  // Throws Error(invalid_parameter) on an invalid spec for sample size n.
  void validate(std::size_t n) const;
  // Resample size: n for naive, m (or its default) for m_out_of_n.
  std::size_t resample_size(std::size_t n) const;
};

struct InferenceReport {
  BetaEstimates point;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool reject_h0_delta_zero = false;
  std::size_t bootstrap_failures = 0;  // degenerate resamples, dropped
  double resample_sd = 0.0;
  BootstrapSpec spec_echo;
  std::size_t m_used = 0;
  // Set for m-out-of-n percentile intervals, which are reported without
  // the sqrt(m/n) rescaling.
  bool unscaled_interval = false;
  std::string interval_note;
  // delta of each resample in index order; NaN marks a dropped resample.
  std::vector<double> resample_deltas;
};

// Indices drawn for resample `index` (size `size`, with replacement from
// 0..n-1). The same stream is used by bootstrap_delta.
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::size_t size, std::uint64_t seed, std::size_t index);

// Pairs bootstrap of delta_hat. Each resample recomputes the empirical cdf
// from its own (tied) y-values, so its delta equals delta_hat() on the
// resampled PairedSample bit for bit.
InferenceReport bootstrap_delta(const PairedSample& sample, const WeightFunction& w, const BootstrapSpec& spec);

struct DeltaZeroTest {
  bool reject = false;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

DeltaZeroTest test_delta_zero(const PairedSample& sample, const WeightFunction& w, const BootstrapSpec& spec);

}  // namespace ginibeta
