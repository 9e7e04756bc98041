#pragma once

#include <limits>
#include <optional>

namespace ginibeta {

// "Moments of order below `order` are finite", plus order itself when
// `attained`. order = +inf with attained = false means every finite order.
struct MomentBound {
  double order = 0.0;
  bool attained = false;

  static MomentBound all() { return {std::numeric_limits<double>::infinity(), false}; }
  // True when a moment of exactly order p is certified finite.
  bool covers(double p) const { return p < order || (attained && p == order); }
};

// What is known about the joint law of (X, Y). Every field is optional;
// unknown fields make the dependent conditions unverifiable, never violated.
struct MomentProfile {
  std::optional<MomentBound> x_moment;            // E|X|^p
  std::optional<MomentBound> y_moment;            // E|Y|^p
  std::optional<bool> cross_moment_finite;        // E|XY| < inf
  std::optional<MomentBound> cond_second_moment;  // E[(E[X^2|Y])^p] < inf, p >= 1
  // gamma such that v^2(F_Y^{-1}(t)) <= c (t(1-t))^{-gamma} on (0,1).
  std::optional<double> cond_var_growth;
  std::optional<bool> cdf_continuous;             // F_Y continuous
  // F_Y^{-1} and g(F_Y^{-1}) continuous on (0,1)
  std::optional<bool> quantile_regression_continuous;
};

}  // namespace ginibeta
