#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ginibeta/error.hpp"
#include "ginibeta/estimators.hpp"
#include "ginibeta/rng.hpp"
#include "ginibeta/simulation.hpp"

using namespace ginibeta;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::usage;
}

// Brute-force general form in long double, straight from the definition.
long double brute_gini_beta(const PairedSample& s, const WeightFunction& w) {
  const auto n = s.size();
  long double mx = 0, my = 0, mw = 0;
  std::vector<long double> ws(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (double v : s.y()) c += v <= s.y()[i];
    ws[i] = w(static_cast<double>(c) / static_cast<double>(n + 1));
    mx += s.x()[i];
    my += s.y()[i];
    mw += ws[i];
  }
  mx /= n;
  my /= n;
  mw /= n;
  long double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (s.x()[i] - mx) * (ws[i] - mw);
    den += (s.y()[i] - my) * (ws[i] - mw);
  }
  return num / den;
}

}  // namespace

TEST_CASE("classical beta", "[estimators]") {
  CHECK(classical_beta(PairedSample({1, 2, 3}, {1, 2, 3})) == 1.0);
  CHECK_THAT(classical_beta(PairedSample({0, 1, 2}, {0, 1, 4})), WithinRel(6.0 / 13.0, 1e-15));
  CHECK(kind_of([] { classical_beta(PairedSample({1, 3}, {2, 2})); }) == ErrorKind::degenerate_sample);
}

TEST_CASE("three-point sample with the identity weight", "[estimators]") {
  const PairedSample s({0, 1, 2}, {0, 1, 4});
  const auto e = delta_hat(s, make_identity());
  CHECK_THAT(e.beta_hat, WithinRel(6.0 / 13.0, 1e-15));
  CHECK_THAT(e.beta_g_hat, WithinRel(0.5, 1e-12));
  CHECK_THAT(e.delta_hat, WithinAbs(1.0 / 26.0, 1e-12));
  CHECK_THAT(e.z0_bar, WithinAbs(0.5, 1e-12));
  CHECK_THAT(e.denom_gini, WithinAbs(1.0 / 3.0, 1e-12));
  CHECK(e.used_fast_path);
  CHECK(e.tie_count == 0);
}

TEST_CASE("gini beta special cases", "[estimators]") {
  const PairedSample diag({1, 2, 3, 4}, {1, 2, 3, 4});
  for (const auto& w : {make_identity(), make_pht(0.75), make_cte(0.5), make_pht(3.0)})
    CHECK(gini_beta(diag, w).beta_g == 1.0);

  CHECK(kind_of([] { gini_beta(PairedSample({1, 2, 3}, {1, 2, 3}), make_pht(1.0)); }) ==
        ErrorKind::degenerate_weight);
  CHECK(kind_of([] { delta_hat(PairedSample({1, 2, 3}, {4, 4, 4}), make_identity()); }) ==
        ErrorKind::degenerate_sample);
}

TEST_CASE("exact linear data gives zero delta", "[estimators]") {
  CounterStream rng(5, 1);
  for (std::size_t n : {10u, 100u, 1000u}) {
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.normal();
      x[i] = 3.0 + 2.0 * y[i];
    }
    const PairedSample s(x, y);
    for (const auto& w : {make_identity(), make_pht(0.75), make_cte(0.9), make_pht(2.0)}) {
      const auto e = delta_hat(s, w);
      CHECK_THAT(e.beta_hat, WithinRel(2.0, 1e-13));
      CHECK_THAT(e.beta_g_hat, WithinRel(2.0, 1e-13));
      CHECK(std::abs(e.delta_hat) < 1e-12);
    }
  }
}

TEST_CASE("order-statistic and general forms agree", "[estimators]") {
  CounterStream rng(99, 2);
  const auto w = make_pht(0.75);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 3 + rng.below(150);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.normal();
      x[i] = y[i] * y[i] + rng.normal();
    }
    const PairedSample s(x, y);
    const auto fast = gini_beta_ordered(sort_induced(s), w);
    const auto general = gini_beta_general(s, w);
    CHECK(fast.used_fast_path);
    CHECK_FALSE(general.used_fast_path);
    CHECK_THAT(fast.beta_g, WithinRel(general.beta_g, 1e-12));
    CHECK_THAT(general.beta_g, WithinRel(static_cast<double>(brute_gini_beta(s, w)), 1e-11));
  }
}

TEST_CASE("tied samples use the general form", "[estimators]") {
  const PairedSample s({1, 2, 3, 5, 4}, {1, 1, 2, 3, 3});
  const auto e = delta_hat(s, make_identity());
  CHECK_FALSE(e.used_fast_path);
  CHECK(e.tie_count == 2);
  CHECK_THAT(e.beta_g_hat, WithinRel(static_cast<double>(brute_gini_beta(s, make_identity())), 1e-13));
}

TEST_CASE("ranked and sorted entry points match delta_hat", "[estimators]") {
  CounterStream rng(3, 3);
  const std::size_t n = 64;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = rng.normal();
    x[i] = rng.normal() + y[i];
  }
  const PairedSample s(x, y);
  const auto w = make_cte(0.8);
  const RankScores scores(w, n);
  CHECK(scores.n() == n);
  CHECK(scores.at(1) == w(1.0 / 65.0));
  const auto ref = delta_hat(s, w);
  const auto sorted = sort_induced(s);
  const auto viasorted = delta_hat_sorted(sorted.x_induced, sorted.y_order, scores);
  CHECK(viasorted.delta_hat == ref.delta_hat);
  const auto viaranked = delta_hat_ranked(s.x(), s.y(), le_counts(s), scores);
  CHECK_THAT(viaranked.delta_hat, WithinAbs(ref.delta_hat, 1e-13));
}

TEST_CASE("population betas of the uniform models", "[estimators]") {
  const auto lin = make_linear_uniform_model(0.0, 1.0, 0.0);
  const auto p = population_betas(lin, make_identity());
  CHECK_THAT(p.beta, WithinRel(1.0, 1e-10));
  CHECK_THAT(p.beta_g, WithinRel(1.0, 1e-10));
  CHECK(std::abs(p.delta) < 1e-10);
  CHECK_THAT(p.B, WithinRel(1.0 / 12.0, 1e-9));
  CHECK_THAT(p.D, WithinRel(1.0 / 12.0, 1e-12));
  CHECK_THAT(p.z0, WithinAbs(0.5, 1e-11));

  const auto quad = make_nonlinear_model(NonlinearFixture::quadratic_uniform, 0.0);
  // identity weight: beta_G = beta = 1
  CHECK(std::abs(population_delta(quad, make_identity())) < 1e-9);
  // threshold 1/2: beta_G = 1, delta = 0
  const auto half = population_betas(quad, make_cte(0.5));
  CHECK_THAT(half.beta_g, WithinRel(1.0, 1e-10));
  CHECK(std::abs(half.delta) < 1e-10);
  // threshold 3/4: beta_G = 7/6, delta = 1/6
  const auto q3 = population_betas(quad, make_cte(0.75));
  CHECK_THAT(q3.beta_g, WithinRel(7.0 / 6.0, 1e-10));
  CHECK_THAT(q3.delta, WithinAbs(1.0 / 6.0, 1e-10));
  CHECK_THAT(q3.B, WithinRel(3.0 / 32.0, 1e-10));
}

TEST_CASE("population delta vanishes for gaussian models", "[estimators]") {
  for (double rho : {0.0, 0.3, 0.9}) {
    const auto m = make_gaussian_model(0, 0, 1, 1, rho);
    for (const auto& w : {make_identity(), make_pht(2.0), make_cte(0.75), make_pht(0.75)}) {
      const auto p = population_betas(m, w);
      CHECK_THAT(p.beta, WithinAbs(rho, 1e-10));
      CHECK(std::abs(p.delta) < 1e-9);
    }
  }
  const auto p = population_betas(make_gaussian_model(0, 0, 1, 1, 0.5), make_cte(0.5));
  CHECK_THAT(p.B, WithinRel(0.39894228040143268, 1e-9));
  CHECK(kind_of([] { population_betas(make_gaussian_model(0, 0, 1, 1, 0.5), make_pht(1.0)); }) ==
        ErrorKind::degenerate_weight);
}
