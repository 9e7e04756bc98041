#include "ginibeta/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ginibeta/error.hpp"
#include "ginibeta/numeric.hpp"

namespace ginibeta {
namespace {

constexpr double kDegenerateRelTol = 1e-12;
constexpr double kEpsSensitivity[] = {1e-5, 1e-6, 1e-7};
constexpr const char* kStieltjesConvention =
    "partition of (eps_q, 1-eps_q) uniform under the double-exponential map; discontinuities of w and model kinks are partition nodes; "
    "w evaluated at cell midpoints; H1, H2 increments taken exactly between nodes";

// Partition of (eps, 1-eps) uniform in tau under t = 1/(1 + exp(-pi sinh tau)):
// cells shrink geometrically toward both ends, where the quantile function
// varies fastest. Breakpoints are merged in as extra nodes.
std::vector<double> stieltjes_nodes(std::size_t cells, double eps, std::span<const double> breaks) {
  std::vector<double> t;
  t.reserve(cells + 1 + breaks.size());
  const double tau_max = std::asinh(std::log((1.0 - eps) / eps) / std::numbers::pi);
  for (std::size_t k = 0; k <= cells; ++k) {
    const double tau = tau_max * (2.0 * static_cast<double>(k) / static_cast<double>(cells) - 1.0);
    const double e = std::exp(-std::numbers::pi * std::sinh(std::abs(tau)));
    // distance to the nearer end is e / (1 + e); no cancellation near 1
    t.push_back(tau < 0.0 ? e / (1.0 + e) : 1.0 / (1.0 + e));
  }
  t.front() = eps;
  t.back() = 1.0 - eps;
  for (double b : breaks)
    if (b > eps && b < 1.0 - eps) t.push_back(b);
  std::sort(t.begin(), t.end());
  // Drop nodes closer than a few ulps so that cell midpoints stay distinct.
  std::vector<double> out;
  out.reserve(t.size());
  for (double v : t) {
    if (!out.empty() && v - out.back() <= 8.0 * std::numeric_limits<double>::epsilon() * v) {
      if (v == 1.0 - eps) out.back() = v;
      continue;
    }
    out.push_back(v);
  }
  return out;
}

struct BetaPair {
  double beta;
  double beta_g;
};

Upsilon2Terms upsilon2_on_partition(const BivariateModel& model, const WeightFunction& w, const WeightIntegrals& wi,
                                    BetaPair betas, std::size_t cells, double eps, std::span<const double> breaks) {
  const std::vector<double> t = stieltjes_nodes(cells, eps, breaks);
  const std::size_t m = t.size() - 1;
  std::vector<double> g(t.size()), yc(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double q = model.quantile(t[k]);
    g[k] = model.cond_mean(q) - model.mean_x;
    yc[k] = q - model.mean_y;
    if (!std::isfinite(g[k]) || !std::isfinite(yc[k]))
      fail(ErrorKind::numeric_quality, "quantile regression is not finite at t=" + std::to_string(t[k]));
  }
  std::vector<double> s(m), w0(m), dh1(m), dh2(m), av1(m), av2(m);
  for (std::size_t i = 0; i < m; ++i) {
    s[i] = 0.5 * (t[i] + t[i + 1]);
    w0[i] = w(s[i]) - wi.z0;
    const double h1a = g[i] - betas.beta_g * yc[i];
    const double h1b = g[i + 1] - betas.beta_g * yc[i + 1];
    const double h2a = g[i] * yc[i] - betas.beta * yc[i] * yc[i];
    const double h2b = g[i + 1] * yc[i + 1] - betas.beta * yc[i + 1] * yc[i + 1];
    dh1[i] = h1b - h1a;
    dh2[i] = h2b - h2a;
    av1[i] = std::abs(g[i + 1] - g[i]) + std::abs(betas.beta_g) * std::abs(yc[i + 1] - yc[i]);
    av2[i] = std::abs(g[i + 1] * yc[i + 1] - g[i] * yc[i]) +
             std::abs(betas.beta) * std::abs(yc[i + 1] * yc[i + 1] - yc[i] * yc[i]);
  }
  return upsilon2_from_increments(s, w0, dh1, dh2, wi.B, wi.D, av1, av2);
}

}  // namespace

std::vector<double> quadrature_breaks(const BivariateModel& model, const WeightFunction& w) {
  std::vector<double> b(w.discontinuities().begin(), w.discontinuities().end());
  for (double q : model.quantile_breaks)
    if (q > 0.0 && q < 1.0) b.push_back(q);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

WeightIntegrals compute_B_D_z0(const BivariateModel& model, const WeightFunction& w, const QuadratureSpec& quad) {
  quad.validate();
  const auto breaks = quadrature_breaks(model, w);
  const double my = model.mean_y;
  WeightIntegrals wi;
  wi.z0 = integrate_unit([&](double t) { return w(t); }, breaks, quad, "z0 = E[w(F_Y(Y))]");
  wi.D = integrate_unit(
      [&](double t) {
        const double d = model.quantile(t) - my;
        return d * d;
      },
      breaks, quad, "D = Var[Y]");
  wi.B = integrate_unit([&](double t) { return (model.quantile(t) - my) * (w(t) - wi.z0); }, breaks, quad,
                        "B = Cov[Y, w(F_Y(Y))]");
  if (!(wi.D > 0.0)) fail(ErrorKind::degenerate_sample, "model has Var[Y] = 0");
  // Spread of w(F_Y(Y)); may be infinite for weights with w^2 outside L1.
  const IntegralResult w2 = integrate(
      [&](double t) {
        const double d = w(t) - wi.z0;
        return d * d;
      },
      0.0, 1.0, breaks, quad.refine_tol, 6 + quad.max_refinements);
  const double spread = w2.converged ? std::sqrt(wi.D * w2.value) : 0.0;
  wi.degenerate = std::abs(wi.B) <= kDegenerateRelTol * spread || wi.B == 0.0;
  return wi;
}

double upsilon1_sq(const BivariateModel& model, const WeightFunction& w, const QuadratureSpec& quad,
                   IntegralResult* diag) {
  const WeightIntegrals wi = compute_B_D_z0(model, w, quad);
  if (wi.degenerate)
    fail(ErrorKind::degenerate_weight, "B = Cov[Y, w(F_Y(Y))] is zero; the normality variance is undefined");
  const auto breaks = quadrature_breaks(model, w);
  try {
    // Magnitude of the two terms taken separately; the difference may cancel
    // to zero (e.g. when w(F_Y) is affine in Y), so convergence is judged
    // against this scale.
    const double scale = integrate_unit(
        [&](double t) {
          const double q = model.quantile(t);
          const double a = (w(t) - wi.z0) / wi.B;
          const double c = (q - model.mean_y) / wi.D;
          return model.cond_var(q) * (a * a + c * c);
        },
        breaks, quad, "conditional-noise variance scale");
    const double v = integrate_unit(
        [&](double t) {
          const double q = model.quantile(t);
          const double r = (w(t) - wi.z0) / wi.B - (q - model.mean_y) / wi.D;
          return model.cond_var(q) * r * r;
        },
        breaks, quad, "conditional-noise variance component", diag, 1e-14 * scale);
    return std::max(v, 0.0);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::assumption_violation) throw;
    fail(ErrorKind::assumption_violation,
         std::string(e.what()) + "; the conditional-variance growth condition of the normality result fails");
  }
}

double gaussian_upsilon1_sq(double rho, double C, double D, const WeightFunction& w, const QuadratureSpec& quad) {
  if (!(rho >= -1.0 && rho <= 1.0) || rho == 0.0)
    fail(ErrorKind::invalid_parameter, "gaussian variance route needs rho in [-1,1] without 0");
  if (!(D > 0.0)) fail(ErrorKind::invalid_parameter, "gaussian variance route needs D > 0");
  if (!std::isfinite(C)) fail(ErrorKind::invalid_parameter, "gaussian variance route needs finite C");
  // perfect correlation leaves no conditional noise
  if (std::abs(rho) == 1.0) return 0.0;
  quad.validate();
  const auto breaks = w.discontinuities();
  const double z0 = integrate_unit([&](double t) { return w(t); }, breaks, quad, "z0 = E[w(Phi(Z))]");
  const double b_std = integrate_unit([&](double t) { return normal_quantile(t) * (w(t) - z0); }, breaks, quad,
                                      "Cov[Z, w(Phi(Z))]");
  if (b_std == 0.0 || !std::isfinite(b_std))
    fail(ErrorKind::degenerate_weight, "B = Cov[Y, w(F_Y(Y))] is zero; the normality variance is undefined");
  const double sd = std::sqrt(D);
  const double B = sd * b_std;
  const double integral = integrate_unit(
      [&](double t) {
        const double r = (w(t) - z0) / B - normal_quantile(t) / sd;
        return r * r;
      },
      breaks, quad, "gaussian conditional-noise integral");
  return (1.0 / (rho * rho) - 1.0) * (C * C / D) * integral;
}

double bridge_form(std::span<const double> s, std::span<const double> a, std::span<const double> b) {
  const std::size_t m = s.size();
  if (a.size() != m || b.size() != m) fail(ErrorKind::internal_inconsistency, "bridge_form: length mismatch");
  if (m == 0) return 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(s[i] > 0.0 && s[i] < 1.0) || (i > 0 && !(s[i] > s[i - 1])))
      fail(ErrorKind::internal_inconsistency, "bridge_form: positions must increase strictly inside (0,1) (i=" + std::to_string(i) + ", s=" + std::to_string(s[i]) + ")");
  }
  // Tail sums: ta[k] = sum_{i >= k} a_i is the value on the interval
  // (s_{k-1}, s_k] (with s_{-1} = 0); beyond s_{m-1} both vanish.
  std::vector<double> ta(m), tb(m);
  {
    CompensatedSum ra, rb;
    for (std::size_t k = m; k-- > 0;) {
      ra.add(a[k]);
      rb.add(b[k]);
      ta[k] = ra.value();
      tb[k] = rb.value();
    }
  }
  CompensatedSum mean_a, mean_b;
  for (std::size_t k = 0; k < m; ++k) {
    const double len = s[k] - (k == 0 ? 0.0 : s[k - 1]);
    mean_a.add(len * ta[k]);
    mean_b.add(len * tb[k]);
  }
  const double ma = mean_a.value();
  const double mb = mean_b.value();
  CompensatedSum cov;
  for (std::size_t k = 0; k < m; ++k) {
    const double len = s[k] - (k == 0 ? 0.0 : s[k - 1]);
    cov.add(len * (ta[k] - ma) * (tb[k] - mb));
  }
  cov.add((1.0 - s[m - 1]) * ma * mb);
  return cov.value();
}

Upsilon2Terms upsilon2_from_increments(std::span<const double> s, std::span<const double> w0,
                                       std::span<const double> dh1, std::span<const double> dh2, double B, double D,
                                       std::span<const double> abs_var1, std::span<const double> abs_var2) {
  const std::size_t m = s.size();
  if (w0.size() != m || dh1.size() != m || dh2.size() != m || (!abs_var1.empty() && abs_var1.size() != m) ||
      (!abs_var2.empty() && abs_var2.size() != m))
    fail(ErrorKind::internal_inconsistency, "upsilon2_from_increments: length mismatch");
  if (B == 0.0 || !(D > 0.0)) fail(ErrorKind::degenerate_weight, "upsilon2 needs B != 0 and D > 0");
  std::vector<double> a(m), c(m), total(m);
  CompensatedSum tv;
  for (std::size_t i = 0; i < m; ++i) {
    a[i] = w0[i] * dh1[i];
    c[i] = dh2[i];
    total[i] = a[i] / B - c[i] / D;
    const double v1 = abs_var1.empty() ? std::abs(dh1[i]) : abs_var1[i];
    const double v2 = abs_var2.empty() ? std::abs(dh2[i]) : abs_var2[i];
    tv.add(std::abs(w0[i]) * v1 / std::abs(B) + v2 / D);
  }
  Upsilon2Terms out;
  out.value = std::max(bridge_form(s, total, total), 0.0);
  out.term11 = bridge_form(s, a, a) / (B * B);
  out.term12 = 2.0 * bridge_form(s, a, c) / (B * D);
  out.term22 = bridge_form(s, c, c) / (D * D);
  out.natural_scale = 0.25 * tv.value() * tv.value();
  const double combined = out.term11 - out.term12 + out.term22;
  const double tol = 1e-10 * (out.term11 + std::abs(out.term12) + out.term22) + 1e-300;
  if (combined < -tol || std::abs(combined - out.value) > 1e-6 * (out.term11 + out.term22) + tol)
    fail(ErrorKind::internal_inconsistency,
         "empirical-process component is inconsistent with its term decomposition (" + std::to_string(combined) +
             " vs " + std::to_string(out.value) + ")");
  return out;
}

double upsilon2_sq(const BivariateModel& model, const WeightFunction& w, double beta, double beta_g,
                   const QuadratureSpec& quad, Upsilon2Diagnostics* diag) {
  quad.validate();
  const WeightIntegrals wi = compute_B_D_z0(model, w, quad);
  if (wi.degenerate)
    fail(ErrorKind::degenerate_weight, "B = Cov[Y, w(F_Y(Y))] is zero; the normality variance is undefined");
  const auto breaks = quadrature_breaks(model, w);
  const BetaPair betas{beta, beta_g};

  Upsilon2Diagnostics d;
  d.eps_q = quad.eps_q;
  d.convention = kStieltjesConvention;
  std::size_t cells = quad.grid_size;
  Upsilon2Terms prev = upsilon2_on_partition(model, w, wi, betas, cells, quad.eps_q, breaks);
  d.history.push_back(prev.value);
  for (int level = 1; level <= quad.max_refinements; ++level) {
    cells *= 2;
    const Upsilon2Terms cur = upsilon2_on_partition(model, w, wi, betas, cells, quad.eps_q, breaks);
    d.history.push_back(cur.value);
    const double scale = std::max(cur.value, 1e-12 * cur.natural_scale);
    prev = cur;
    if (std::abs(cur.value - d.history[d.history.size() - 2]) <= quad.refine_tol * scale) {
      d.converged = true;
      break;
    }
  }
  d.terms = prev;
  d.cells = cells;
  if (!d.converged) {
    if (diag) *diag = d;
    fail(ErrorKind::numeric_quality, "empirical-process variance component did not converge after " +
                                         std::to_string(quad.max_refinements) + " grid doublings");
  }
  if (diag) {
    for (double eps : kEpsSensitivity) {
      const double v =
          eps == quad.eps_q ? prev.value : upsilon2_on_partition(model, w, wi, betas, cells, eps, breaks).value;
      d.eps_sensitivity.emplace_back(eps, v);
    }
    *diag = d;
  }
  return prev.value;
}

VarianceComponents asymptotic_variance(const BivariateModel& model, const WeightFunction& w,
                                       const QuadratureSpec& quad) {
  VarianceComponents vc;
  vc.assumptions = check_theorem_assumptions(w, Theorem::asymptotic_normality, model.moments);
  if (vc.assumptions.overall == Verdict::violated) {
    std::string detail;
    for (const auto& c : vc.assumptions.conditions)
      if (c.name == vc.assumptions.binding) detail = c.detail;
    fail(ErrorKind::assumption_violation,
         "normality assumptions violated: " + vc.assumptions.binding + (detail.empty() ? "" : " (" + detail + ")"));
  }
  for (const auto& c : vc.assumptions.conditions)
    if (c.verdict == Verdict::unverifiable) vc.warnings.push_back("unverifiable condition: " + c.name);

  const WeightIntegrals wi = compute_B_D_z0(model, w, quad);
  if (wi.degenerate)
    fail(ErrorKind::degenerate_weight, "B = Cov[Y, w(F_Y(Y))] is zero; the normality variance is undefined");
  const auto breaks = quadrature_breaks(model, w);
  const double a = integrate_unit(
      [&](double t) { return (model.cond_mean(model.quantile(t)) - model.mean_x) * (w(t) - wi.z0); }, breaks,
      quad, "Cov[X, w(F_Y(Y))]");
  const double cov = integrate_unit(
      [&](double t) {
        const double q = model.quantile(t);
        return (model.cond_mean(q) - model.mean_x) * (q - model.mean_y);
      },
      breaks, quad, "Cov[X,Y]");
  vc.z0 = wi.z0;
  vc.B = wi.B;
  vc.D = wi.D;
  vc.beta = cov / wi.D;
  vc.beta_g = a / wi.B;
  vc.delta = vc.beta_g - vc.beta;
  vc.upsilon1_sq = upsilon1_sq(model, w, quad, &vc.upsilon1_diag);
  vc.upsilon2_sq = upsilon2_sq(model, w, vc.beta, vc.beta_g, quad, &vc.upsilon2_diag);
  const double scale = vc.upsilon2_diag.terms.natural_scale;
  vc.upsilon2_normalized = scale > 0.0 ? vc.upsilon2_sq / scale : 0.0;

  double lo = vc.upsilon2_sq, hi = vc.upsilon2_sq;
  for (const auto& [eps, v] : vc.upsilon2_diag.eps_sensitivity) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo > 1e-3 * std::max(vc.upsilon2_sq, 1e-12 * scale))
    vc.warnings.push_back("empirical-process component is sensitive to the endpoint cutoff (spread " +
                          std::to_string(hi - lo) + "); tail conditions may be close to failing");
  return vc;
}

}  // namespace ginibeta
