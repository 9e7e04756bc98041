#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <numeric>

#include "ginibeta/empirical.hpp"
#include "ginibeta/error.hpp"
#include "ginibeta/rng.hpp"

using namespace ginibeta;

TEST_CASE("empirical cdf uses the n+1 denominator", "[empirical]") {
  const PairedSample s({0, 0, 0}, {1, 2, 3});
  CHECK(empirical_cdf(s, 2.0) == 0.5);
  CHECK(empirical_cdf(s, 0.0) == 0.0);
  CHECK(empirical_cdf(s, 3.0) == 0.75);
  CHECK(empirical_cdf(s, 1e9) == 0.75);
}

TEST_CASE("empirical cdf counts ties with <=", "[empirical]") {
  const PairedSample s({0, 0, 0}, {5, 5, 7});
  CHECK(empirical_cdf(s, 5.0) == 0.5);
  CHECK(s.tie_count() == 1);
  const auto counts = le_counts(s);
  CHECK(counts == std::vector<std::uint32_t>{2, 2, 3});
}

TEST_CASE("induced order statistics", "[empirical]") {
  const PairedSample s({10, 20, 30}, {3, 1, 2});
  const auto sorted = sort_induced(s);
  CHECK(sorted.y_order == std::vector<double>{1, 2, 3});
  CHECK(sorted.x_induced == std::vector<double>{20, 30, 10});
  CHECK(sorted.permutation == std::vector<std::size_t>{1, 2, 0});
  CHECK(sorted.restore() == s);

  const PairedSample already({4, 5, 6}, {1, 2, 3});
  CHECK(sort_induced(already).permutation == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("tied y keeps the original order", "[empirical]") {
  const PairedSample s({1, 2}, {5, 5});
  const auto sorted = sort_induced(s);
  CHECK(sorted.x_induced == std::vector<double>{1, 2});
  CHECK(sorted.tie_count == 1);
}

TEST_CASE("sort and restore round trip on random data with ties", "[empirical]") {
  CounterStream rng(11, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 2 + rng.below(60);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y[i] = static_cast<double>(rng.below(8));
    }
    const PairedSample s(x, y);
    const auto sorted = sort_induced(s);
    CHECK(std::is_sorted(sorted.y_order.begin(), sorted.y_order.end()));
    CHECK(sorted.restore() == s);
    // <= counts agree with a brute-force count
    const auto counts = le_counts(s);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t c = 0;
      for (double v : y) c += v <= y[i];
      CHECK(counts[i] == c);
    }
  }
}

TEST_CASE("paired sample validation", "[empirical]") {
  CHECK_THROWS_AS(PairedSample({1.0}, {1.0}), Error);
  CHECK_THROWS_AS(PairedSample({1.0, 2.0}, {1.0}), Error);
  CHECK_THROWS_AS(PairedSample({1.0, std::numeric_limits<double>::quiet_NaN()}, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(PairedSample({1.0, 2.0}, {1.0, std::numeric_limits<double>::infinity()}), Error);
  CHECK_NOTHROW(PairedSample({1.0, 2.0}, {1.0, 2.0}));
}
