// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <array>

#include "eft.hpp"
#include "ginibeta/kernels.hpp"

namespace ginibeta::kernels::detail {
namespace {

// Four independent compensated accumulators, one per lane.
struct Acc4 {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  inline void add(__m256d v) {
    const __m256d t = _mm256_add_pd(s, v);
    const __m256d bp = _mm256_sub_pd(t, s);
    const __m256d e = _mm256_add_pd(_mm256_sub_pd(s, _mm256_sub_pd(t, bp)), _mm256_sub_pd(v, bp));
    s = t;
    c = _mm256_add_pd(c, e);
  }
  inline void add_product(__m256d a, __m256d b) {
    const __m256d p = _mm256_mul_pd(a, b);
    const __m256d lo = _mm256_fmsub_pd(a, b, p);
    add(p);
    c = _mm256_add_pd(c, lo);
  }
  // Lane order is fixed so the reduction is deterministic.
  inline CompensatedAccumulator reduce() const {
    alignas(32) std::array<double, 4> sv{};
    alignas(32) std::array<double, 4> cv{};
    _mm256_store_pd(sv.data(), s);
    _mm256_store_pd(cv.data(), c);
    CompensatedAccumulator out;
    for (int i = 0; i < 4; ++i) {
      out.add(sv[i]);
      out.c += cv[i];
    }
    return out;
  }
};

double sum_avx2(const double* v, std::size_t n) {
  Acc4 a0, a1;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0.add(_mm256_loadu_pd(v + i));
    a1.add(_mm256_loadu_pd(v + i + 4));
  }
  for (; i + 4 <= n; i += 4) a0.add(_mm256_loadu_pd(v + i));
  CompensatedAccumulator acc = a0.reduce();
  acc.merge(a1.reduce());
  for (; i < n; ++i) acc.add(v[i]);
  return acc.value();
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  Acc4 acc4;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc4.add_product(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
  CompensatedAccumulator acc = acc4.reduce();
  for (; i < n; ++i) acc.add_product(a[i], b[i]);
  return acc.value();
}

CrossMoments cross_avx2(const double* x, const double* y, const double* w, std::size_t n,
                        double mx, double my, double mw) {
  const __m256d vmx = _mm256_set1_pd(mx);
  const __m256d vmy = _mm256_set1_pd(my);
  const __m256d vmw = _mm256_set1_pd(mw);
  Acc4 xy, yy, xw, yw, ww;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), vmy);
    const __m256d dw = _mm256_sub_pd(_mm256_loadu_pd(w + i), vmw);
    xy.add_product(dx, dy);
    yy.add_product(dy, dy);
    xw.add_product(dx, dw);
    yw.add_product(dy, dw);
    ww.add_product(dw, dw);
  }
  CompensatedAccumulator rxy = xy.reduce(), ryy = yy.reduce(), rxw = xw.reduce(),
                         ryw = yw.reduce(), rww = ww.reduce();
  for (; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    const double dw = w[i] - mw;
    rxy.add_product(dx, dy);
    ryy.add_product(dy, dy);
    rxw.add_product(dx, dw);
    ryw.add_product(dy, dw);
    rww.add_product(dw, dw);
  }
  return {rxy.value(), ryy.value(), rxw.value(), ryw.value(), rww.value()};
}

}  // namespace

const KernelTable avx2_table{&sum_avx2, &dot_avx2, &cross_avx2};

}  // namespace ginibeta::kernels::detail
