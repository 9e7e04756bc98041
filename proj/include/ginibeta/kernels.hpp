#pragma once

// Reduction kernels used by every estimator inner loop. Each kernel has a
// scalar reference implementation and, where the target supports it, an
// AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant is chosen once at
// runtime from CPU features; GINIBETA_SIMD=scalar|avx2|neon overrides it.
//
// All kernels use error-free transformations (TwoSum / FMA TwoProduct) so the
// result is accurate to roughly twice working precision regardless of the
// lane layout. Backends agree to a few ulps, not bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ginibeta::kernels {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b) noexcept;
bool backend_supported(Backend b) noexcept;
std::vector<Backend> supported_backends();

Backend active_backend() noexcept;
// Throws Error(invalid_parameter) when the backend is not available here.
void force_backend(Backend b);

struct CrossMoments {
  double sxy = 0.0;  // sum (x-mx)(y-my)
  double syy = 0.0;  // sum (y-my)^2
  double sxw = 0.0;  // sum (x-mx)(w-mw)
  double syw = 0.0;  // sum (y-my)(w-mw)
  double sww = 0.0;  // sum (w-mw)^2
};

double sum(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
CrossMoments cross_moments(std::span<const double> x, std::span<const double> y,
                           std::span<const double> w, double mx, double my, double mw);

// Per-backend entry points; the dispatching functions above forward to one
// of these. Exposed for equivalence tests.
struct KernelTable {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  CrossMoments (*cross_moments)(const double*, const double*, const double*, std::size_t,
                                double, double, double);
};

const KernelTable& table_for(Backend b);

namespace detail {
extern const KernelTable scalar_table;
#if defined(GINIBETA_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(GINIBETA_HAVE_NEON)
extern const KernelTable neon_table;
#endif
}  // namespace detail

}  // namespace ginibeta::kernels
