#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ginibeta {

// Controls every numerical integral over (0,1).
//  - grid_size / eps_q: starting cell count of the Riemann-Stieltjes sums
//    over (eps_q, 1 - eps_q); cells are uniform in the double-exponential
//    variable, so they shrink geometrically towards both ends;
//  - refine_tol: relative change between successive refinements that counts
//    as converged;
//  - max_refinements: number of step halvings before giving up.
struct QuadratureSpec {
  std::size_t grid_size = 4096;
  double eps_q = 1e-6;
  double refine_tol = 1e-8;
  int max_refinements = 10;

  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double l1_norm = 0.0;  // integral of |f|, used as a cancellation-aware scale
  int levels = 0;
  bool converged = false;
  std::vector<double> history;  // estimate after each halving
};

// Integral of f over (lo, hi), split at the given interior breakpoints.
// Each piece is integrated with the double-exponential (tanh-sinh) change of
// variables followed by the trapezoid rule, halving the step until the
// estimate moves by less than rel_tol (relative to max(|I|, 1e-3 * L1)).
// f is never evaluated at lo, hi or a breakpoint, so integrable endpoint
// singularities are fine.
// A change of at most abs_tol also counts as converged (for integrands that
// cancel to zero).
IntegralResult integrate(const std::function<double(double)>& f, double lo, double hi,
                         std::span<const double> breakpoints, double rel_tol, int max_levels, double abs_tol = 0.0);

// Convenience wrapper: integral over (0,1); throws Error(numeric_quality)
// when the refinement does not converge. `what` names the quantity in the
// error message.
double integrate_unit(const std::function<double(double)>& f, std::span<const double> breakpoints,
                      const QuadratureSpec& spec, const char* what, IntegralResult* diag = nullptr,
                      double abs_tol = 0.0);

}  // namespace ginibeta
