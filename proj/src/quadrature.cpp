#include "ginibeta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ginibeta/error.hpp"
#include "ginibeta/numeric.hpp"

namespace ginibeta {
namespace {

constexpr double kTauMax = 4.0;
constexpr int kMinLevels = 3;
// Quadrature levels beyond the user's refinement budget; tanh-sinh needs a
// handful of halvings before its error estimate is meaningful.
constexpr int kBaseLevels = 6;

struct Piece {
  double lo;
  double hi;
};

// Sum of f(x(tau)) x'(tau) over tau = j*h for the given j's, with x mapping
// R onto (lo, hi). Nodes that round onto an endpoint are dropped.
void accumulate_nodes(const std::function<double(double)>& f, const Piece& p, double h, bool odd_only,
                      CompensatedSum& sum, CompensatedSum& abs_sum) {
  const double half = 0.5 * (p.hi - p.lo);
  const long jmax = static_cast<long>(std::ceil(kTauMax / h));
  for (long j = -jmax; j <= jmax; ++j) {
    if (odd_only && (j % 2 == 0)) continue;
    const double tau = static_cast<double>(j) * h;
    const double q = 0.5 * std::numbers::pi * std::sinh(tau);
    const double cq = std::cosh(q);
    const double weight = half * 0.5 * std::numbers::pi * std::cosh(tau) / (cq * cq);
    // distance to the nearer endpoint, computed without cancellation
    const double delta = 2.0 * half / (1.0 + std::exp(2.0 * std::abs(q)));
    const double x = tau >= 0.0 ? p.hi - delta : p.lo + delta;
    if (!(x > p.lo && x < p.hi) || weight == 0.0) continue;
    const double fx = f(x);
    if (!std::isfinite(fx))
      fail(ErrorKind::numeric_quality, "integrand is not finite at t=" + std::to_string(x));
    sum.add(fx * weight);
    abs_sum.add(std::abs(fx) * weight);
  }
}

}  // namespace

void QuadratureSpec::validate() const {
  if (grid_size < 16) fail(ErrorKind::invalid_parameter, "quadrature grid_size must be at least 16");
  if (!(eps_q > 0.0 && eps_q < 0.01)) fail(ErrorKind::invalid_parameter, "quadrature eps_q must lie in (0, 0.01)");
  if (!(refine_tol > 0.0 && refine_tol < 1.0)) fail(ErrorKind::invalid_parameter, "quadrature refine_tol must lie in (0,1)");
  if (max_refinements < 1 || max_refinements > 16)
    fail(ErrorKind::invalid_parameter, "quadrature max_refinements must lie in [1,16]");
}

IntegralResult integrate(const std::function<double(double)>& f, double lo, double hi,
                         std::span<const double> breakpoints, double rel_tol, int max_levels, double abs_tol) {
  std::vector<Piece> pieces;
  double a = lo;
  for (double b : breakpoints) {
    if (b > a && b < hi) {
      pieces.push_back({a, b});
      a = b;
    }
  }
  pieces.push_back({a, hi});

  // Running (unscaled) sums per piece; the level-k estimate is h_k * sum.
  std::vector<CompensatedSum> sums(pieces.size()), abs_sums(pieces.size());
  double h = 1.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) accumulate_nodes(f, pieces[i], h, false, sums[i], abs_sums[i]);

  IntegralResult out;
  auto estimate = [&](double step) {
    CompensatedSum total, l1;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      total.add(step * sums[i].value());
      l1.add(step * abs_sums[i].value());
    }
    out.l1_norm = l1.value();
    return total.value();
  };
  double prev = estimate(h);
  out.history.push_back(prev);
  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    for (std::size_t i = 0; i < pieces.size(); ++i) accumulate_nodes(f, pieces[i], h, true, sums[i], abs_sums[i]);
    const double cur = estimate(h);
    out.history.push_back(cur);
    out.levels = level;
    out.value = cur;
    const double scale = std::max(std::abs(cur), 1e-3 * out.l1_norm);
    if (level >= kMinLevels && std::abs(cur - prev) <= std::max(rel_tol * scale, abs_tol)) {
      out.converged = true;
      return out;
    }
    prev = cur;
  }
  out.value = prev;
  return out;
}

double integrate_unit(const std::function<double(double)>& f, std::span<const double> breakpoints,
                      const QuadratureSpec& spec, const char* what, IntegralResult* diag, double abs_tol) {
  IntegralResult r = integrate(f, 0.0, 1.0, breakpoints, spec.refine_tol, kBaseLevels + spec.max_refinements, abs_tol);
  if (diag) *diag = r;
  if (!r.converged) {
    // Divergence shows up as an estimate that keeps growing in magnitude as
    // nodes approach the endpoints.
    const auto n = r.history.size();
    bool growing = n >= 4;
    for (std::size_t k = n - 3; growing && k < n; ++k)
      growing = std::abs(r.history[k]) > std::abs(r.history[k - 1]) * (1.0 + 10.0 * spec.refine_tol);
    growing = growing && std::abs(r.history[n - 1]) > abs_tol;
    fail(growing ? ErrorKind::assumption_violation : ErrorKind::numeric_quality,
         std::string(what) + ": quadrature did not converge" +
             (growing ? " (estimate grows under refinement; integrand is likely not integrable)" : ""));
  }
  return r.value;
}

}  // namespace ginibeta
