#include "ginibeta/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ginibeta/error.hpp"

namespace ginibeta {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSafety = 1.1;

// Evaluation points for the growth-constant supremum: a uniform grid plus
// geometric ladders towards both endpoints.
std::vector<double> certification_grid() {
  std::vector<double> ts;
  constexpr int kUniform = 10000;
  for (int i = 1; i < kUniform; ++i) ts.push_back(static_cast<double>(i) / kUniform);
  for (double d = 1e-4; d > 1e-15; d *= 0.8) {
    ts.push_back(d);
    ts.push_back(1.0 - d);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::string_view family_name(WeightFamily f) noexcept {
  switch (f) {
    case WeightFamily::pht: return "pht";
    case WeightFamily::cte: return "cte";
    case WeightFamily::tabulated: return "tabulated";
  }
  return "unknown";
}

std::string_view continuity_name(ContinuityClass c) noexcept {
  switch (c) {
    case ContinuityClass::continuous: return "continuous-on-[0,1]";
    case ContinuityClass::bounded_discontinuous: return "bounded-discontinuous";
    case ContinuityClass::unbounded: return "unbounded";
  }
  return "unknown";
}

double WeightFunction::evaluate(double t) const {
  if (!(t > 0.0 && t < 1.0))
    fail(ErrorKind::invalid_parameter, "weight evaluated outside (0,1): t=" + format_number(t));
  switch (family_) {
    case WeightFamily::pht: return nu_ * std::pow(1.0 - t, nu_ - 1.0);
    case WeightFamily::cte: return t > nu_ ? 1.0 : 0.0;
    case WeightFamily::tabulated: {
      if (t <= grid_.front().t) return grid_.front().w;
      if (t >= grid_.back().t) return grid_.back().w;
      const auto it = std::upper_bound(grid_.begin(), grid_.end(), t,
                                       [](double v, const TabulatedPoint& p) { return v < p.t; });
      const TabulatedPoint& hi = *it;
      const TabulatedPoint& lo = *(it - 1);
      const double lambda = (t - lo.t) / (hi.t - lo.t);
      return (1.0 - lambda) * lo.w + lambda * hi.w;
    }
  }
  return 0.0;
}

std::optional<double> WeightFunction::derivative(double t) const {
  if (!(t > 0.0 && t < 1.0)) return std::nullopt;
  if (std::binary_search(breaks_.begin(), breaks_.end(), t)) return std::nullopt;
  switch (family_) {
    case WeightFamily::pht:
      if (nu_ == 1.0) return 0.0;
      return -nu_ * (nu_ - 1.0) * std::pow(1.0 - t, nu_ - 2.0);
    case WeightFamily::cte: return 0.0;
    case WeightFamily::tabulated: {
      if (t < grid_.front().t || t > grid_.back().t) return 0.0;
      auto it = std::upper_bound(grid_.begin(), grid_.end(), t,
                                 [](double v, const TabulatedPoint& p) { return v < p.t; });
      if (it == grid_.end()) --it;
      const TabulatedPoint& hi = *it;
      const TabulatedPoint& lo = *(it - 1);
      return (hi.w - lo.w) / (hi.t - lo.t);
    }
  }
  return std::nullopt;
}

std::string WeightFunction::describe() const {
  switch (family_) {
    case WeightFamily::pht: return "pht(nu=" + format_number(nu_) + ")";
    case WeightFamily::cte: return "cte(nu=" + format_number(nu_) + ")";
    case WeightFamily::tabulated: return "tabulated(" + std::to_string(grid_.size()) + " points)";
  }
  return "unknown";
}

void WeightFunction::certify_growth() {
  if (growth_.unbounded_growth) {
    growth_.c = kInf;
    return;
  }
  double sup = 0.0;
  for (double t : certification_grid()) {
    const double scale = std::pow(t * (1.0 - t), 0.5 * growth_.b);
    double m = std::abs(evaluate(t));
    if (auto d = derivative(t)) m = std::max(m, t * (1.0 - t) * std::abs(*d));
    sup = std::max(sup, m * scale);
  }
  growth_.c = kSafety * sup;
}

WeightFunction make_pht(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) fail(ErrorKind::invalid_parameter, "pht weight needs nu > 0");
  WeightFunction w;
  w.family_ = WeightFamily::pht;
  w.nu_ = nu;
  if (nu >= 1.0) {
    w.continuity_ = ContinuityClass::continuous;
    w.growth_ = {false, 0.0, 0.0};
    w.lq_ = {false, kInf, true};
  } else {
    w.continuity_ = ContinuityClass::unbounded;
    if (nu > 0.5) {
      // |w| ~ (1-t)^(nu-1) forces b/2 >= 1-nu
      w.growth_ = {false, 2.0 * (1.0 - nu), 0.0};
      // int (1-t)^(2q(nu-1)) dt < inf  iff  q < 1/(2-2nu)
      w.lq_ = {false, 1.0 / (2.0 - 2.0 * nu), false};
    } else {
      w.growth_ = {true, kInf, kInf};
      w.lq_ = {true, 0.0, false};
    }
  }
  w.certify_growth();
  return w;
}

WeightFunction make_cte(double nu) {
  if (!(nu > 0.0 && nu < 1.0)) fail(ErrorKind::invalid_parameter, "cte weight needs nu in (0,1)");
  WeightFunction w;
  w.family_ = WeightFamily::cte;
  w.nu_ = nu;
  w.breaks_ = {nu};
  w.continuity_ = ContinuityClass::bounded_discontinuous;
  w.growth_ = {false, 0.0, 0.0};
  w.lq_ = {false, kInf, true};
  w.certify_growth();
  return w;
}

WeightFunction make_tabulated(std::vector<TabulatedPoint> grid) {
  if (grid.size() < 2) fail(ErrorKind::invalid_parameter, "tabulated weight needs at least 2 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& p = grid[i];
    if (!(p.t > 0.0 && p.t < 1.0))
      fail(ErrorKind::invalid_parameter, "tabulated weight: t=" + format_number(p.t) + " outside (0,1)");
    if (!std::isfinite(p.w)) fail(ErrorKind::invalid_parameter, "tabulated weight: non-finite value");
    if (i > 0 && !(p.t > grid[i - 1].t))
      fail(ErrorKind::invalid_parameter, "tabulated weight: t-values must be strictly increasing");
  }
  WeightFunction w;
  w.family_ = WeightFamily::tabulated;
  w.nu_ = std::numeric_limits<double>::quiet_NaN();
  w.grid_ = std::move(grid);
  // kinks: knots where the slope changes (slope 0 outside the grid span)
  const auto& g = w.grid_;
  double left = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double right = i + 1 < g.size() ? (g[i + 1].w - g[i].w) / (g[i + 1].t - g[i].t) : 0.0;
    if (right != left) w.breaks_.push_back(g[i].t);
    left = right;
  }
  w.continuity_ = ContinuityClass::continuous;
  w.growth_ = {false, 0.0, 0.0};
  w.lq_ = {false, kInf, true};
  w.numeric_only_ = true;
  w.certify_growth();
  return w;
}

WeightFunction make_identity() {
  constexpr double eps = 1e-12;
  return make_tabulated({{eps, eps}, {1.0 - eps, 1.0 - eps}});
}

Theorem parse_theorem(std::string_view tag) {
  if (tag == "T1" || tag == "t1") return Theorem::strong_consistency;
  if (tag == "T2" || tag == "t2") return Theorem::weak_consistency;
  if (tag == "T3" || tag == "t3") return Theorem::asymptotic_normality;
  fail(ErrorKind::usage, "unknown theorem tag '" + std::string(tag) + "' (expected T1, T2 or T3)");
}

std::string_view theorem_tag(Theorem t) noexcept {
  switch (t) {
    case Theorem::strong_consistency: return "T1";
    case Theorem::weak_consistency: return "T2";
    case Theorem::asymptotic_normality: return "T3";
  }
  return "?";
}

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    case Verdict::unverifiable: return "unverifiable";
  }
  return "unknown";
}

namespace {

ConditionVerdict known_flag(std::string name, const std::optional<bool>& flag, std::string what) {
  if (!flag) return {std::move(name), Verdict::unverifiable, what + " not certified by the model"};
  return {std::move(name), *flag ? Verdict::satisfied : Verdict::violated,
          what + (*flag ? " holds" : " fails")};
}

ConditionVerdict moment_covers(std::string name, const std::optional<MomentBound>& m, double p,
                               const std::string& var) {
  const std::string what = "E|" + var + "|^" + format_number(p) + " finite";
  if (!m) return {std::move(name), Verdict::unverifiable, what + ": moments of " + var + " unknown"};
  return {std::move(name), m->covers(p) ? Verdict::satisfied : Verdict::violated, what};
}

// Largest certified p with E[(E[X^2|Y])^p] < inf, from the direct bound or
// from E|X|^{2p} via Jensen.
std::optional<MomentBound> conditional_second_moment(const MomentProfile& m) {
  std::optional<MomentBound> out = m.cond_second_moment;
  if (m.x_moment) {
    const MomentBound derived{m.x_moment->order / 2.0, m.x_moment->attained};
    if (!out || derived.order > out->order || (derived.order == out->order && derived.attained))
      out = derived;
  }
  return out;
}

ConditionVerdict weight_continuity(const WeightFunction& w) {
  ConditionVerdict v{"weight-continuous-on-closed-interval", Verdict::satisfied, ""};
  switch (w.continuity()) {
    case ContinuityClass::continuous:
      v.detail = w.describe() + " is continuous on [0,1]";
      break;
    case ContinuityClass::bounded_discontinuous: {
      v.verdict = Verdict::violated;
      std::string pts;
      for (double d : w.discontinuities()) pts += (pts.empty() ? "" : ", ") + format_number(d);
      v.detail = w.describe() + " has a discontinuity at " + pts;
      break;
    }
    case ContinuityClass::unbounded:
      v.verdict = Verdict::violated;
      v.detail = w.describe() + " is unbounded near t=1";
      break;
  }
  return v;
}

void finish(AssumptionReport& r) {
  r.overall = Verdict::satisfied;
  for (const auto& c : r.conditions)
    if (c.verdict == Verdict::violated) {
      r.overall = Verdict::violated;
      r.binding = c.name;
      return;
    }
  for (const auto& c : r.conditions)
    if (c.verdict == Verdict::unverifiable) {
      r.overall = Verdict::unverifiable;
      r.binding = c.name;
      return;
    }
}

}  // namespace

AssumptionReport check_theorem_assumptions(const WeightFunction& w, Theorem theorem,
                                           const MomentProfile& m) {
  AssumptionReport r;
  r.theorem = theorem;
  r.numeric_only = w.numeric_only();
  auto& cs = r.conditions;

  switch (theorem) {
    case Theorem::strong_consistency: {
      cs.push_back(moment_covers("mean-x-finite", m.x_moment, 1.0, "X"));
      cs.push_back(moment_covers("second-moment-y-finite", m.y_moment, 2.0, "Y"));
      ConditionVerdict cross{"cross-moment-finite", Verdict::unverifiable, "E|XY| finiteness unknown"};
      if (m.cross_moment_finite) {
        cross = known_flag("cross-moment-finite", m.cross_moment_finite, "E|XY| < inf");
      } else if (m.x_moment && m.y_moment) {
        // Hoelder: E|XY| <= (E|X|^p)^(1/p) (E|Y|^q)^(1/q), 1/p + 1/q = 1
        const double s = 1.0 / m.x_moment->order + 1.0 / m.y_moment->order;
        if (s < 1.0 || (s == 1.0 && m.x_moment->attained && m.y_moment->attained)) {
          cross.verdict = Verdict::satisfied;
          cross.detail = "E|XY| < inf by Hoelder's inequality";
        } else {
          cross.detail = "moment orders of X and Y too low for Hoelder's inequality";
        }
      }
      cs.push_back(cross);
      cs.push_back(weight_continuity(w));
      break;
    }
    case Theorem::weak_consistency: {
      cs.push_back(moment_covers("second-moment-y-finite", m.y_moment, 2.0, "Y"));
      cs.push_back(known_flag("cdf-y-continuous", m.cdf_continuous, "continuity of F_Y"));
      const LqSet& lq = w.w2_lq();
      ConditionVerdict l1{"weight-square-integrable", Verdict::satisfied, "w^2 in L_1"};
      if (lq.empty) {
        l1.verdict = Verdict::violated;
        l1.detail = "w^2 is not integrable for " + w.describe();
      }
      cs.push_back(l1);
      ConditionVerdict pair{"conjugate-exponents", Verdict::unverifiable, ""};
      const auto p = conditional_second_moment(m);
      if (lq.empty) {
        pair.verdict = Verdict::violated;
        pair.detail = "no q >= 1 with w^2 in L_q";
      } else if (!p) {
        pair.detail = "integrability of E[X^2|Y] unknown";
      } else {
        const bool p_ok = p->covers(1.0);
        const double s = 1.0 / p->order + 1.0 / lq.q_sup;
        const bool feasible = p_ok && (s < 1.0 || (s == 1.0 && p->attained && lq.attained));
        pair.verdict = feasible ? Verdict::satisfied : Verdict::violated;
        pair.detail = "E[(E[X^2|Y])^p] finite up to p=" + format_number(p->order) +
                      ", w^2 in L_q up to q=" + format_number(lq.q_sup) +
                      (feasible ? ": a conjugate pair exists" : ": no conjugate pair 1/p + 1/q = 1");
      }
      cs.push_back(pair);
      break;
    }
    case Theorem::asymptotic_normality: {
      cs.push_back(known_flag("cdf-y-continuous", m.cdf_continuous, "continuity of F_Y"));
      {
        std::string pts;
        for (double d : w.discontinuities()) pts += (pts.empty() ? "" : ", ") + format_number(d);
        cs.push_back({"weight-piecewise-c1", Verdict::satisfied,
                      pts.empty() ? "w is continuously differentiable on (0,1)"
                                  : "w is continuously differentiable except at " + pts});
        if (w.discontinuities().empty()) {
          cs.push_back({"quantile-regression-continuous-at-breaks", Verdict::satisfied, "no break points"});
        } else {
          auto v = known_flag("quantile-regression-continuous-at-breaks", m.quantile_regression_continuous,
                              "continuity of F_Y^{-1} and g(F_Y^{-1}) at " + pts);
          cs.push_back(v);
        }
      }
      const GrowthBound& g = w.growth();
      if (g.unbounded_growth) {
        cs.push_back({"weight-growth-bound", Verdict::violated,
                      "no b in [0,1) bounds |w| and t(1-t)|w'| by c (t(1-t))^(-b/2) for " + w.describe()});
        cs.push_back({"moment-y-order", Verdict::unverifiable, "required order undefined without a growth bound"});
        cs.push_back({"cond-var-growth", Verdict::unverifiable, "required exponent undefined without a growth bound"});
        break;
      }
      r.b = g.b;
      const double order = std::max(4.0, 2.0 / (1.0 - g.b));
      r.required_moment_order = order;
      cs.push_back({"weight-growth-bound", Verdict::satisfied,
                    "b=" + format_number(g.b) + ", c=" + format_number(g.c)});
      ConditionVerdict mom{"moment-y-order", Verdict::unverifiable,
                           "need E|Y|^r1 < inf for some r1 > " + format_number(order)};
      if (m.y_moment) mom.verdict = m.y_moment->order > order ? Verdict::satisfied : Verdict::violated;
      cs.push_back(mom);
      const double limit = 2.0 / order;  // = min{1/2, 1-b}
      ConditionVerdict cv{"cond-var-growth", Verdict::unverifiable,
                          "need v^2(F^{-1}(t)) <= c (t(1-t))^(-gamma) with gamma < " + format_number(limit)};
      if (m.cond_var_growth)
        cv.verdict = *m.cond_var_growth < limit ? Verdict::satisfied : Verdict::violated;
      cs.push_back(cv);
      break;
    }
  }
  finish(r);
  return r;
}

}  // namespace ginibeta
