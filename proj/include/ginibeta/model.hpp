#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ginibeta/empirical.hpp"
#include "ginibeta/moments.hpp"
#include "ginibeta/rng.hpp"

namespace ginibeta {

// Parameters of a bivariate normal model, kept for the closed-form route of
// the conditional-noise variance component.
struct GaussianParameters {
  double rho = 0.0;
  double cov_xy = 0.0;  // C = Cov[X,Y]
  double var_x = 1.0;
  double var_y = 1.0;   // D = Var[Y]
};

// Analytic description of the law of (X, Y) through the quantile function of
// Y and the first two conditional moments of X given Y.
struct BivariateModel {
  std::string name;
  std::function<double(double)> quantile;   // F_Y^{-1}(t), t in (0,1)
  std::function<double(double)> cond_mean;  // g(y) = E[X | Y=y]
  std::function<double(double)> cond_var;   // v^2(y) = Var[X | Y=y]
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_y = 1.0;
  // Draws one (x, y) pair from the stream.
  std::function<std::pair<double, double>(CounterStream&)> draw;
  MomentProfile moments;
  std::optional<GaussianParameters> gaussian;
  // t-values where quantile or cond_mean(quantile) has a kink; used as
  // quadrature breakpoints.
  std::vector<double> quantile_breaks;

  PairedSample sample(CounterStream& stream, std::size_t n) const;
  PairedSample sample(std::uint64_t seed, std::size_t n, std::uint64_t stream_id = 0) const;
};

}  // namespace ginibeta
