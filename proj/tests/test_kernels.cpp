#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ginibeta/estimators.hpp"
#include "ginibeta/kernels.hpp"
#include "ginibeta/rng.hpp"

using namespace ginibeta;
namespace k = ginibeta::kernels;

namespace {

struct Data {
  std::vector<double> x, y, w;
};

Data make_data(std::size_t n, std::uint64_t seed, double offset) {
  CounterStream rng(seed, n);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    d.y.push_back(offset + rng.normal());
    d.x.push_back(offset + 0.5 * d.y.back() + rng.normal());
    d.w.push_back(rng.uniform());
  }
  return d;
}

long double exact_sum(const std::vector<double>& v) {
  long double s = 0;
  for (double a : v) s += a;
  return s;
}

bool close(double a, double b, double scale, double ulps) {
  return std::abs(a - b) <= ulps * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
}

// Restores the runtime choice after a test forces a backend.
struct BackendGuard {
  k::Backend saved = k::active_backend();
  ~BackendGuard() { k::force_backend(saved); }
};

}  // namespace

TEST_CASE("scalar backend is always available", "[kernels]") {
  CHECK(k::backend_supported(k::Backend::scalar));
  const auto all = k::supported_backends();
  CHECK(std::find(all.begin(), all.end(), k::Backend::scalar) != all.end());
  CHECK(std::find(all.begin(), all.end(), k::active_backend()) != all.end());
}

TEST_CASE("unsupported backends are rejected", "[kernels]") {
  for (auto b : {k::Backend::avx2, k::Backend::neon})
    if (!k::backend_supported(b)) CHECK_THROWS(k::force_backend(b));
}

TEST_CASE("scalar kernels are compensated", "[kernels]") {
  // 1 + many tiny values: a naive sum loses all of them
  std::vector<double> v(1, 1.0);
  v.insert(v.end(), 1000, 1e-17);
  v.push_back(-1.0);
  const double s = k::detail::scalar_table.sum(v.data(), v.size());
  CHECK(std::abs(s - 1e-14) < 1e-25);
}

TEST_CASE("backends agree on every kernel", "[kernels]") {
  const auto& ref = k::detail::scalar_table;
  for (auto b : k::supported_backends()) {
    const auto& t = k::table_for(b);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 31u, 64u, 1000u, 4099u}) {
      for (double offset : {0.0, 1e6}) {
        const auto d = make_data(n, 17, offset);
        INFO("backend " << k::backend_name(b) << " n=" << n << " offset=" << offset);
        const double s_ref = ref.sum(d.x.data(), n);
        const double s = t.sum(d.x.data(), n);
        CHECK(close(s, s_ref, std::abs(static_cast<double>(exact_sum(d.x))) + 1.0, 4));
        const double dot_ref = ref.dot(d.x.data(), d.y.data(), n);
        CHECK(close(t.dot(d.x.data(), d.y.data(), n), dot_ref, std::abs(dot_ref) + 1.0, 4));
        if (n == 0) continue;
        const double mx = s_ref / n, my = ref.sum(d.y.data(), n) / n, mw = ref.sum(d.w.data(), n) / n;
        const auto a = ref.cross_moments(d.x.data(), d.y.data(), d.w.data(), n, mx, my, mw);
        const auto c = t.cross_moments(d.x.data(), d.y.data(), d.w.data(), n, mx, my, mw);
        const double scale = std::sqrt(a.syy * (a.sww + 1.0)) + a.syy + 1.0;
        CHECK(close(c.sxy, a.sxy, scale, 8));
        CHECK(close(c.syy, a.syy, scale, 8));
        CHECK(close(c.sxw, a.sxw, scale, 8));
        CHECK(close(c.syw, a.syw, scale, 8));
        CHECK(close(c.sww, a.sww, scale, 8));
      }
    }
  }
}

TEST_CASE("estimators give the same answer under every backend", "[kernels]") {
  BackendGuard guard;
  const auto d = make_data(777, 5, 0.0);
  const PairedSample s(d.x, d.y);
  const auto w = make_pht(0.75);
  k::force_backend(k::Backend::scalar);
  const auto ref = delta_hat(s, w);
  for (auto b : k::supported_backends()) {
    k::force_backend(b);
    CHECK(k::active_backend() == b);
    const auto e = delta_hat(s, w);
    CHECK(std::abs(e.delta_hat - ref.delta_hat) <= 1e-14 * (std::abs(ref.beta_hat) + 1.0));
  }
}
