#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ginibeta/model.hpp"
#include "ginibeta/quadrature.hpp"
#include "ginibeta/weights.hpp"

namespace ginibeta {

struct WeightIntegrals {
  double z0 = 0.0;  // E[w(F_Y(Y))]
  double B = 0.0;   // Cov[Y, w(F_Y(Y))]
  double D = 0.0;   // Var[Y]
  // True when |B| is negligible against sqrt(D * Var[w(F_Y(Y))]); the
  // normality variance is undefined then.
  bool degenerate = false;
};

// Sorted union of the weight's discontinuities and the model's kinks.
std::vector<double> quadrature_breaks(const BivariateModel& model, const WeightFunction& w);

WeightIntegrals compute_B_D_z0(const BivariateModel& model, const WeightFunction& w, const QuadratureSpec& quad = {});

// Conditional-noise component: integral over (0,1) of
//   v^2(F^{-1}(t)) ((w(t)-z0)/B - (F^{-1}(t)-E[Y])/D)^2.
double upsilon1_sq(const BivariateModel& model, const WeightFunction& w, const QuadratureSpec& quad = {},
                   IntegralResult* diag = nullptr);

// Closed-form route for a bivariate normal law with correlation rho,
// C = Cov[X,Y] and D = Var[Y]:
//   (1/rho^2 - 1) (C^2/D) * integral of ((w-z0)/B - Phi^{-1}(t)/sqrt(D))^2,
// with z0 and B computed for normal Y.
double gaussian_upsilon1_sq(double rho, double C, double D, const WeightFunction& w, const QuadratureSpec& quad = {});

// Sum over a partition with cell positions s (strictly increasing in (0,1))
// of (min(s_i,s_j) - s_i s_j) a_i b_j, evaluated in O(N) as the covariance,
// under u ~ Uniform(0,1), of the tail sums sum_{s_i >= u} a_i and
// sum_{s_i >= u} b_i. With a == b the result is a variance, hence >= 0.
double bridge_form(std::span<const double> s, std::span<const double> a, std::span<const double> b);

// Empirical-process component assembled from Stieltjes increments.
struct Upsilon2Terms {
  double value = 0.0;  // variance form of the whole functional, >= 0
  double term11 = 0.0; // (1/B^2)  sum K (w0 dH1)(w0 dH1)
  double term12 = 0.0; // (2/(BD)) sum K (w0 dH1) dH2, enters with a minus sign
  double term22 = 0.0; // (1/D^2)  sum K dH2 dH2
  double natural_scale = 0.0;  // (total-variation bound)^2 / 4 of the functional
};

// s: cell positions; w0: w(s_i) - z0; dh1, dh2: increments of H1, H2 over
// each cell; abs_var: per-cell absolute variation used for the natural scale
// (may be empty, then |increments| are used).
Upsilon2Terms upsilon2_from_increments(std::span<const double> s, std::span<const double> w0,
                                       std::span<const double> dh1, std::span<const double> dh2, double B, double D,
                                       std::span<const double> abs_var1 = {},
                                       std::span<const double> abs_var2 = {});

struct Upsilon2Diagnostics {
  Upsilon2Terms terms;
  std::size_t cells = 0;        // cells of the accepted partition
  double eps_q = 0.0;
  bool converged = false;
  std::vector<double> history;  // value after each doubling
  // (eps_q, value) at the accepted cell count for eps_q in {1e-5, 1e-6, 1e-7}
  std::vector<std::pair<double, double>> eps_sensitivity;
  std::string convention;
};

// Empirical-process component with H1(t) = g(F^{-1}(t)) - E[X] - beta_g (F^{-1}(t) - E[Y]) and
// H2(t) = (g(F^{-1}(t)) - E[X])(F^{-1}(t) - E[Y]) - beta (F^{-1}(t) - E[Y])^2.
double upsilon2_sq(const BivariateModel& model, const WeightFunction& w, double beta, double beta_g,
                   const QuadratureSpec& quad = {}, Upsilon2Diagnostics* diag = nullptr);

struct VarianceComponents {
  double upsilon1_sq = 0.0;
  double upsilon2_sq = 0.0;
  double B = 0.0;
  double D = 0.0;
  double z0 = 0.0;
  double beta = 0.0;
  double beta_g = 0.0;
  double delta = 0.0;
  // upsilon2_sq divided by its natural scale; ~0 for a linear conditional mean
  double upsilon2_normalized = 0.0;
  IntegralResult upsilon1_diag;
  Upsilon2Diagnostics upsilon2_diag;
  AssumptionReport assumptions;
  std::vector<std::string> warnings;

  double total() const noexcept { return upsilon1_sq + upsilon2_sq; }
};

// Asymptotic variance of sqrt(n) (delta_hat - delta). Throws
// Error(assumption_violation) naming the binding condition when the
// normality assumptions are violated by the model's moment profile or the
// weight; unverifiable conditions become warnings.
VarianceComponents asymptotic_variance(const BivariateModel& model, const WeightFunction& w,
                                       const QuadratureSpec& quad = {});

}  // namespace ginibeta
