// aarch64 only; NEON (AdvSIMD) is part of the baseline ISA there.

#include <arm_neon.h>

#include <array>

#include "eft.hpp"
#include "ginibeta/kernels.hpp"

namespace ginibeta::kernels::detail {
namespace {

struct Acc2 {
  float64x2_t s = vdupq_n_f64(0.0);
  float64x2_t c = vdupq_n_f64(0.0);

  inline void add(float64x2_t v) {
    const float64x2_t t = vaddq_f64(s, v);
    const float64x2_t bp = vsubq_f64(t, s);
    const float64x2_t e = vaddq_f64(vsubq_f64(s, vsubq_f64(t, bp)), vsubq_f64(v, bp));
    s = t;
    c = vaddq_f64(c, e);
  }
  inline void add_product(float64x2_t a, float64x2_t b) {
    const float64x2_t p = vmulq_f64(a, b);
    const float64x2_t lo = vfmaq_f64(vnegq_f64(p), a, b);
    add(p);
    c = vaddq_f64(c, lo);
  }
  inline CompensatedAccumulator reduce() const {
    CompensatedAccumulator out;
    out.add(vgetq_lane_f64(s, 0));
    out.c += vgetq_lane_f64(c, 0);
    out.add(vgetq_lane_f64(s, 1));
    out.c += vgetq_lane_f64(c, 1);
    return out;
  }
};

double sum_neon(const double* v, std::size_t n) {
  Acc2 a0, a1;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0.add(vld1q_f64(v + i));
    a1.add(vld1q_f64(v + i + 2));
  }
  for (; i + 2 <= n; i += 2) a0.add(vld1q_f64(v + i));
  CompensatedAccumulator acc = a0.reduce();
  acc.merge(a1.reduce());
  for (; i < n; ++i) acc.add(v[i]);
  return acc.value();
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  Acc2 acc2;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc2.add_product(vld1q_f64(a + i), vld1q_f64(b + i));
  CompensatedAccumulator acc = acc2.reduce();
  for (; i < n; ++i) acc.add_product(a[i], b[i]);
  return acc.value();
}

CrossMoments cross_neon(const double* x, const double* y, const double* w, std::size_t n,
                        double mx, double my, double mw) {
  const float64x2_t vmx = vdupq_n_f64(mx);
  const float64x2_t vmy = vdupq_n_f64(my);
  const float64x2_t vmw = vdupq_n_f64(mw);
  Acc2 xy, yy, xw, yw, ww;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(x + i), vmx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(y + i), vmy);
    const float64x2_t dw = vsubq_f64(vld1q_f64(w + i), vmw);
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

const KernelTable neon_table{&sum_neon, &dot_neon, &cross_neon};

}  // namespace ginibeta::kernels::detail
