#include <atomic>
#include <cstdlib>
#include <string>

#include "ginibeta/error.hpp"
#include "ginibeta/kernels.hpp"

namespace ginibeta::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(GINIBETA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() noexcept {
  if (const char* env = std::getenv("GINIBETA_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Backend::scalar;
    if (want == "avx2" && backend_supported(Backend::avx2)) return Backend::avx2;
    if (want == "neon" && backend_supported(Backend::neon)) return Backend::neon;
  }
  if (backend_supported(Backend::avx2)) return Backend::avx2;
  if (backend_supported(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{&table_for(detect())};
  return table;
}

std::atomic<Backend>& current_backend() {
  static std::atomic<Backend> b{detect()};
  return b;
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

bool backend_supported(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return true;
    case Backend::avx2: return cpu_has_avx2();
    case Backend::neon:
#if defined(GINIBETA_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Backend> supported_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon})
    if (backend_supported(b)) out.push_back(b);
  return out;
}

const KernelTable& table_for(Backend b) {
  switch (b) {
    case Backend::scalar: return detail::scalar_table;
    case Backend::avx2:
#if defined(GINIBETA_HAVE_AVX2)
      if (cpu_has_avx2()) return detail::avx2_table;
#endif
      break;
    case Backend::neon:
#if defined(GINIBETA_HAVE_NEON)
      return detail::neon_table;
#endif
      break;
  }
  fail(ErrorKind::invalid_parameter,
       "SIMD backend '" + std::string(backend_name(b)) + "' is not available on this CPU");
}

Backend active_backend() noexcept { return current_backend().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
  const KernelTable& t = table_for(b);
  current().store(&t, std::memory_order_relaxed);
  current_backend().store(b, std::memory_order_relaxed);
}

double sum(std::span<const double> v) {
  return current().load(std::memory_order_relaxed)->sum(v.data(), v.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorKind::internal_inconsistency, "dot: length mismatch");
  return current().load(std::memory_order_relaxed)->dot(a.data(), b.data(), a.size());
}

CrossMoments cross_moments(std::span<const double> x, std::span<const double> y,
                           std::span<const double> w, double mx, double my, double mw) {
  if (x.size() != y.size() || x.size() != w.size())
    fail(ErrorKind::internal_inconsistency, "cross_moments: length mismatch");
  return current().load(std::memory_order_relaxed)
      ->cross_moments(x.data(), y.data(), w.data(), x.size(), mx, my, mw);
}

}  // namespace ginibeta::kernels
