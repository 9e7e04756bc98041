#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ginibeta/moments.hpp"

namespace ginibeta {

enum class WeightFamily { pht, cte, tabulated };
enum class ContinuityClass { continuous, bounded_discontinuous, unbounded };

std::string_view family_name(WeightFamily f) noexcept;
std::string_view continuity_name(ContinuityClass c) noexcept;

// Growth certificate for |w(t)| and t(1-t)|w'(t)| <= c (t(1-t))^{-b/2}.
struct GrowthBound {
  bool unbounded_growth = false;  // no b in [0,1) works
  double b = 0.0;
  double c = 0.0;                 // grid supremum times 1.1
};

// Set of q in [1, inf] with w^2 in L_q: empty, [1, q_sup) or [1, q_sup].
struct LqSet {
  bool empty = false;
  double q_sup = 0.0;
  bool attained = false;

  bool contains(double q) const { return !empty && q >= 1.0 && (q < q_sup || (attained && q == q_sup)); }
};

struct TabulatedPoint {
  double t;
  double w;
};

// Immutable weight function w: (0,1) -> R with the regularity metadata the
// consistency and normality results depend on.
class WeightFunction {
 public:
  double operator()(double t) const { return evaluate(t); }
  double evaluate(double t) const;
  // w'(t); empty at the listed discontinuity points.
  std::optional<double> derivative(double t) const;

  WeightFamily family() const noexcept { return family_; }
  // Family parameter (nu) for pht/cte; NaN for tabulated weights.
  double parameter() const noexcept { return nu_; }
  std::span<const TabulatedPoint> grid() const noexcept { return grid_; }

  // Points in (0,1) where w or w' jumps, strictly increasing.
  std::span<const double> discontinuities() const noexcept { return breaks_; }
  ContinuityClass continuity() const noexcept { return continuity_; }
  const GrowthBound& growth() const noexcept { return growth_; }
  const LqSet& w2_lq() const noexcept { return lq_; }
  // True when the certificates come from a dense-grid check rather than the
  // closed form.
  bool numeric_only() const noexcept { return numeric_only_; }
  // Short description, e.g. "pht(nu=0.75)".
  std::string describe() const;

 private:
  friend WeightFunction make_pht(double nu);
  friend WeightFunction make_cte(double nu);
  friend WeightFunction make_tabulated(std::vector<TabulatedPoint> grid);

  WeightFunction() = default;
  void certify_growth();

  WeightFamily family_ = WeightFamily::pht;
  double nu_ = 1.0;
  std::vector<TabulatedPoint> grid_;
  std::vector<double> breaks_;
  ContinuityClass continuity_ = ContinuityClass::continuous;
  GrowthBound growth_;
  LqSet lq_;
  bool numeric_only_ = false;
};

// w(t) = nu (1-t)^(nu-1), nu > 0.
WeightFunction make_pht(double nu);
// w(t) = 1{t > nu}, 0 < nu < 1.
WeightFunction make_cte(double nu);
// Piecewise-linear through the grid, constant beyond its ends.
WeightFunction make_tabulated(std::vector<TabulatedPoint> grid);
// w(t) = t, tabulated on [1e-12, 1 - 1e-12].
WeightFunction make_identity();

enum class Theorem { strong_consistency, weak_consistency, asymptotic_normality };

// "T1" / "T2" / "T3" as used on the command line.
Theorem parse_theorem(std::string_view tag);
std::string_view theorem_tag(Theorem t) noexcept;

enum class Verdict { satisfied, violated, unverifiable };
std::string_view verdict_name(Verdict v) noexcept;

struct ConditionVerdict {
  std::string name;
  Verdict verdict = Verdict::unverifiable;
  std::string detail;
};

struct AssumptionReport {
  Theorem theorem = Theorem::strong_consistency;
  Verdict overall = Verdict::unverifiable;
  std::string binding;  // first violated (else unverifiable) condition; empty if satisfied
  std::vector<ConditionVerdict> conditions;
  std::optional<double> b;                      // growth exponent used
  std::optional<double> required_moment_order;  // r = max{4, 2/(1-b)}
  bool numeric_only = false;
};

AssumptionReport check_theorem_assumptions(const WeightFunction& w, Theorem theorem,
                                           const MomentProfile& moments);

}  // namespace ginibeta
