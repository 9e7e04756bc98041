#include "eft.hpp"

#include "ginibeta/kernels.hpp"

namespace ginibeta::kernels::detail {
namespace {

double sum_scalar(const double* v, std::size_t n) {
  CompensatedAccumulator acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(v[i]);
  return acc.value();
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  CompensatedAccumulator acc;
  for (std::size_t i = 0; i < n; ++i) acc.add_product(a[i], b[i]);
  return acc.value();
}

CrossMoments cross_scalar(const double* x, const double* y, const double* w, std::size_t n,
                          double mx, double my, double mw) {
  CompensatedAccumulator xy, yy, xw, yw, ww;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    const double dw = w[i] - mw;
    xy.add_product(dx, dy);
    yy.add_product(dy, dy);
    xw.add_product(dx, dw);
    yw.add_product(dy, dw);
    ww.add_product(dw, dw);
  }
  return {xy.value(), yy.value(), xw.value(), yw.value(), ww.value()};
}

}  // namespace

const KernelTable scalar_table{&sum_scalar, &dot_scalar, &cross_scalar};

}  // namespace ginibeta::kernels::detail
