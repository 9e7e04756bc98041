#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ginibeta/asymptotics.hpp"
#include "ginibeta/inference.hpp"
#include "ginibeta/model.hpp"
#include "ginibeta/quadrature.hpp"
#include "ginibeta/weights.hpp"

namespace ginibeta {

// Bivariate normal: E[X|Y=y] = mu_x + beta (y - mu_y) with
// beta = rho sqrt(var_x/var_y), Var[X|Y] = (1-rho^2) var_x.
BivariateModel make_gaussian_model(double mu_x, double mu_y, double var_x, double var_y, double rho);

// Y ~ Uniform(0,1), X = a + c Y + sigma eps. sigma = 0 gives a deterministic
// linear law.
BivariateModel make_linear_uniform_model(double a, double c, double sigma);

enum class NonlinearFixture {
  quadratic_uniform,  // Y ~ U(0,1), X = Y^2 + sigma eps
  lognormal,          // Y = exp(Z/4), X = 4 log Y + sigma eps (= Z + sigma eps)
  pareto,             // Y ~ Pareto(alpha = 3) on [1, inf), X = Y + sigma eps; fails the
                      // fourth-moment requirement of the normality result
};

std::string_view fixture_name(NonlinearFixture f) noexcept;
NonlinearFixture parse_fixture(std::string_view s);

BivariateModel make_nonlinear_model(NonlinearFixture fixture, double sigma = 0.1);

enum class Check { consistency, normality, variance_match, coverage, size, power };
std::string_view check_name(Check c) noexcept;
Check parse_check(std::string_view s);

struct MonteCarloPlan {
  BivariateModel model;
  WeightFunction w = make_identity();
  std::vector<std::size_t> sample_sizes;  // strictly increasing, each >= 2
  std::size_t replications = 1000;        // R >= 100
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  // Used by coverage, size and power; per-replicate seeds are derived from
  // the plan seed.
  BootstrapSpec bootstrap;
  QuadratureSpec quad;
  bool keep_replicates = false;

  void validate() const;
};

struct SampleSizeSummary {
  std::size_t n = 0;
  std::size_t replications = 0;
  std::size_t failures = 0;
  double mean_delta_hat = 0.0;
  double bias = 0.0;
  double median_bias = 0.0;
  double rmse = 0.0;
  double var_scaled = 0.0;  // sample variance of sqrt(n)(delta_hat - delta)
  std::optional<double> variance_ratio;  // var_scaled / (upsilon1^2 + upsilon2^2)
  std::optional<double> ks_distance;     // standardized replicates vs Phi
  std::optional<double> ks_critical;     // 1.63 / sqrt(R)
  std::optional<double> coverage;        // CI contains the true delta
  std::optional<double> rejection_rate;  // CI excludes 0
  std::size_t bootstrap_failures = 0;
  std::vector<double> replicates;        // delta_hat values when kept
};

struct MonteCarloResult {
  std::string model;
  std::string weight;
  std::vector<Check> checks;
  double delta = 0.0;  // population value from quadrature
  std::optional<VarianceComponents> variance;
  std::vector<SampleSizeSummary> per_n;
  // RMSE strictly decreasing in n (consistency check)
  std::optional<bool> rmse_decreasing;
  std::vector<std::string> notes;
};

// Runs the plan. Replicate r at sample size n draws from the stream
// (seed, n, r), so results do not depend on scheduling. Throws when the
// oracle fails or more than 1% of the replicates at some n fail.
MonteCarloResult run_plan(const MonteCarloPlan& plan);

}  // namespace ginibeta
