#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "ginibeta/error.hpp"
#include "ginibeta/weights.hpp"

using namespace ginibeta;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

MomentProfile all_moments_bounded_noise() {
  MomentProfile m;
  m.x_moment = MomentBound::all();
  m.y_moment = MomentBound::all();
  m.cross_moment_finite = true;
  m.cond_second_moment = MomentBound::all();
  m.cond_var_growth = 0.0;
  m.cdf_continuous = true;
  m.quantile_regression_continuous = true;
  return m;
}

const ConditionVerdict& find(const AssumptionReport& r, const std::string& name) {
  for (const auto& c : r.conditions)
    if (c.name == name) return c;
  FAIL("condition " << name << " missing");
  return r.conditions.front();
}

}  // namespace

TEST_CASE("pht weight values and metadata", "[weights]") {
  const auto one = make_pht(1.0);
  for (double t : {1e-9, 0.1, 0.5, 0.9, 1.0 - 1e-9}) CHECK(one(t) == 1.0);
  CHECK(one.growth().b == 0.0);
  CHECK(one.continuity() == ContinuityClass::continuous);

  const auto two = make_pht(2.0);
  CHECK(two(0.5) == 1.0);
  CHECK_THAT(two(0.2), WithinRel(1.6, 1e-15));
  CHECK(two.derivative(0.3).value() == -2.0);

  const auto frac = make_pht(0.75);
  CHECK(frac.growth().b == 0.5);
  CHECK(frac.continuity() == ContinuityClass::unbounded);
  CHECK(std::isfinite(frac.growth().c));
  // q_sup = 1/(2 - 2 nu) = 2, open
  CHECK(frac.w2_lq().contains(1.0));
  CHECK(frac.w2_lq().contains(1.99));
  CHECK_FALSE(frac.w2_lq().contains(2.0));

  const auto low = make_pht(0.4);
  CHECK(low.growth().unbounded_growth);
  CHECK(low.w2_lq().empty);

  CHECK_THROWS_AS(make_pht(0.0), Error);
  CHECK_THROWS_AS(make_pht(-1.0), Error);
  CHECK_THROWS_AS(make_pht(std::numeric_limits<double>::infinity()), Error);
}

TEST_CASE("growth constant bounds the weight on a fine grid", "[weights]") {
  for (double nu : {0.6, 0.75, 0.9, 1.5, 3.0}) {
    const auto w = make_pht(nu);
    const double b = w.growth().b;
    const double c = w.growth().c;
    for (int i = 1; i < 2000; ++i) {
      const double t = i / 2000.0;
      const double bound = c * std::pow(t * (1 - t), -0.5 * b);
      CHECK(std::abs(w(t)) <= bound);
      CHECK(t * (1 - t) * std::abs(*w.derivative(t)) <= bound);
    }
  }
}

TEST_CASE("cte weight values and metadata", "[weights]") {
  const auto w = make_cte(0.95);
  CHECK(w(0.99) == 1.0);
  CHECK(w(0.5) == 0.0);
  CHECK(w(0.95) == 0.0);
  REQUIRE(w.discontinuities().size() == 1);
  CHECK(w.discontinuities()[0] == 0.95);
  CHECK_FALSE(w.derivative(0.95).has_value());
  CHECK(w.derivative(0.5).value() == 0.0);
  CHECK(w.continuity() == ContinuityClass::bounded_discontinuous);

  const auto half = make_cte(0.5);
  CHECK(half.w2_lq().contains(std::numeric_limits<double>::infinity()));
  CHECK(half.growth().b == 0.0);

  CHECK_THROWS_AS(make_cte(0.0), Error);
  CHECK_THROWS_AS(make_cte(1.0), Error);
}

TEST_CASE("tabulated weight interpolation", "[weights]") {
  CHECK(make_tabulated({{0.25, 0.0}, {0.75, 1.0}})(0.5) == 0.5);
  const auto flat = make_tabulated({{0.1, 2.0}, {0.9, 2.0}});
  for (double t : {0.01, 0.1, 0.5, 0.95}) CHECK(flat(t) == 2.0);
  const auto tent = make_tabulated({{0.2, 0.0}, {0.5, 3.0}, {0.8, 0.0}});
  CHECK_THAT(tent(0.35), WithinAbs(1.5, 1e-15));
  CHECK(tent(0.1) == 0.0);
  CHECK(tent(0.9) == 0.0);
  CHECK(tent.numeric_only());
  CHECK(tent.discontinuities().size() == 3);

  CHECK_THROWS_AS(make_tabulated({{0.5, 1.0}}), Error);
  CHECK_THROWS_AS(make_tabulated({{0.5, 1.0}, {0.4, 2.0}}), Error);
  CHECK_THROWS_AS(make_tabulated({{0.0, 1.0}, {0.4, 2.0}}), Error);

  const auto id = make_identity();
  for (double t : {0.001, 0.25, 0.5, 0.999}) CHECK_THAT(id(t), WithinAbs(t, 1e-15));
}

TEST_CASE("weight evaluation outside the open interval is rejected", "[weights]") {
  const auto w = make_pht(2.0);
  CHECK_THROWS_AS(w(0.0), Error);
  CHECK_THROWS_AS(w(1.0), Error);
}

TEST_CASE("assumption checker: pht 0.75 under the normality result", "[weights]") {
  const auto r = check_theorem_assumptions(make_pht(0.75), Theorem::asymptotic_normality, all_moments_bounded_noise());
  CHECK(r.overall == Verdict::satisfied);
  CHECK(r.binding.empty());
  REQUIRE(r.b.has_value());
  CHECK(*r.b == 0.5);
  REQUIRE(r.required_moment_order.has_value());
  CHECK(*r.required_moment_order == 4.0);
}

TEST_CASE("assumption checker: cte fails continuity for strong consistency", "[weights]") {
  const auto r = check_theorem_assumptions(make_cte(0.9), Theorem::strong_consistency, {});
  CHECK(r.overall == Verdict::violated);
  CHECK(r.binding == "weight-continuous-on-closed-interval");
  CHECK(find(r, "weight-continuous-on-closed-interval").detail.find("0.9") != std::string::npos);
}

TEST_CASE("assumption checker: pht 2 with finite moments passes strong consistency", "[weights]") {
  MomentProfile m;
  m.x_moment = MomentBound{1.0, true};
  m.y_moment = MomentBound{2.0, true};
  m.cross_moment_finite = true;
  const auto r = check_theorem_assumptions(make_pht(2.0), Theorem::strong_consistency, m);
  CHECK(r.overall == Verdict::satisfied);
}

TEST_CASE("assumption checker: pht 0.4 fails square integrability", "[weights]") {
  const auto r = check_theorem_assumptions(make_pht(0.4), Theorem::weak_consistency, all_moments_bounded_noise());
  CHECK(r.overall == Verdict::violated);
  CHECK(r.binding == "weight-square-integrable");
  // nu just above one half is admissible given bounded conditional second moments
  const auto ok = check_theorem_assumptions(make_pht(0.55), Theorem::weak_consistency, all_moments_bounded_noise());
  CHECK(ok.overall == Verdict::satisfied);
}

TEST_CASE("assumption checker: conjugate exponent pairing", "[weights]") {
  MomentProfile m = all_moments_bounded_noise();
  m.x_moment.reset();
  // w^2 in L_q for q < 2 needs p > 2
  m.cond_second_moment = MomentBound{2.0, true};
  CHECK(check_theorem_assumptions(make_pht(0.75), Theorem::weak_consistency, m).overall == Verdict::violated);
  m.cond_second_moment = MomentBound{2.5, false};
  CHECK(check_theorem_assumptions(make_pht(0.75), Theorem::weak_consistency, m).overall == Verdict::satisfied);
}

TEST_CASE("assumption checker: unknown moments are unverifiable, not violated", "[weights]") {
  const auto r = check_theorem_assumptions(make_pht(2.0), Theorem::asymptotic_normality, {});
  CHECK(r.overall == Verdict::unverifiable);
  CHECK(find(r, "moment-y-order").verdict == Verdict::unverifiable);
}

TEST_CASE("assumption checker: moment order and growth failures", "[weights]") {
  MomentProfile m = all_moments_bounded_noise();
  m.y_moment = MomentBound{3.0, false};
  auto r = check_theorem_assumptions(make_pht(2.0), Theorem::asymptotic_normality, m);
  CHECK(r.overall == Verdict::violated);
  CHECK(r.binding == "moment-y-order");

  r = check_theorem_assumptions(make_pht(0.4), Theorem::asymptotic_normality, all_moments_bounded_noise());
  CHECK(r.overall == Verdict::violated);
  CHECK(r.binding == "weight-growth-bound");

  // b = 0.8 for nu = 0.6 raises the moment requirement to 2/(1-b) = 10
  r = check_theorem_assumptions(make_pht(0.6), Theorem::asymptotic_normality, all_moments_bounded_noise());
  CHECK(r.overall == Verdict::satisfied);
  CHECK_THAT(*r.required_moment_order, WithinRel(10.0, 1e-12));

  m = all_moments_bounded_noise();
  m.cond_var_growth = 0.5;
  r = check_theorem_assumptions(make_pht(2.0), Theorem::asymptotic_normality, m);
  CHECK(r.binding == "cond-var-growth");
}

TEST_CASE("theorem tags round trip", "[weights]") {
  for (const char* tag : {"T1", "T2", "T3"}) CHECK(theorem_tag(parse_theorem(tag)) == tag);
  CHECK_THROWS_AS(parse_theorem("T4"), Error);
}
