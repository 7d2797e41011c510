#include "kgdelta/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "kgdelta/errors.hpp"

namespace kgdelta::kernels {

namespace detail {

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(std::size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_sq_scalar(std::size_t n, const double* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double cell_diff_sq_scalar(std::size_t n, const double* x) {
  if (n == 0) return 0.0;
  double s = x[0] * x[0] + x[n - 1] * x[n - 1];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = x[i + 1] - x[i];
    s += d * d;
  }
  return s;
}

void nonlinear_kick_scalar(std::size_t n, double c, double pm1,
                           const double* ur, const double* ui, double* vr,
                           double* vi) {
  if (pm1 == 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double w = c * (ur[i] * ur[i] + ui[i] * ui[i]);
      vr[i] += w * ur[i];
      vi[i] += w * ui[i];
    }
    return;
  }
  if (pm1 == 1.0) {
    // sqrt, not pow(·, 0.5): sqrt is correctly rounded on every path, so the
    // vector variants can reproduce it bit for bit.
    for (std::size_t i = 0; i < n; ++i) {
      const double w = c * std::sqrt(ur[i] * ur[i] + ui[i] * ui[i]);
      vr[i] += w * ur[i];
      vi[i] += w * ui[i];
    }
    return;
  }
  const double half = 0.5 * pm1;
  for (std::size_t i = 0; i < n; ++i) {
    const double r2 = ur[i] * ur[i] + ui[i] * ui[i];
    const double w = c * std::pow(r2, half);
    vr[i] += w * ur[i];
    vi[i] += w * ui[i];
  }
}

void lap_combine_scalar(std::size_t n, double inv_h2, double m2,
                        const double* u, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double left = (i > 0) ? u[i - 1] : 0.0;
    const double right = (i + 1 < n) ? u[i + 1] : 0.0;
    out[i] = (left - 2.0 * u[i] + right) * inv_h2 - m2 * u[i];
  }
}

#if KGDELTA_HAVE_AVX2
void axpy_avx2(std::size_t n, double a, const double* x, double* y);
double dot_avx2(std::size_t n, const double* x, const double* y);
double sum_sq_avx2(std::size_t n, const double* x);
double cell_diff_sq_avx2(std::size_t n, const double* x);
void nonlinear_kick_avx2(std::size_t n, double c, double pm1, const double* ur,
                         const double* ui, double* vr, double* vi);
void lap_combine_avx2(std::size_t n, double inv_h2, double m2, const double* u,
                      double* out);
#endif

}  // namespace detail

namespace {

bool host_has_avx2() {
#if KGDELTA_HAVE_AVX2 && defined(__x86_64__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("KGDELTA_ISA")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0 && host_has_avx2()) return Isa::avx2;
  }
  return host_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& isa_state() {
  static std::atomic<Isa> state{initial_isa()};
  return state;
}

}  // namespace

bool isa_supported(Isa isa) {
  return isa == Isa::scalar || (isa == Isa::avx2 && host_has_avx2());
}

Isa active_isa() { return isa_state().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) throw DomainError("requested ISA not supported on this host");
  isa_state().store(isa, std::memory_order_relaxed);
}

void axpy(std::size_t n, double a, const double* x, double* y) {
#if KGDELTA_HAVE_AVX2
  if (active_isa() == Isa::avx2) return detail::axpy_avx2(n, a, x, y);
#endif
  detail::axpy_scalar(n, a, x, y);
}

double dot(std::size_t n, const double* x, const double* y) {
#if KGDELTA_HAVE_AVX2
  if (active_isa() == Isa::avx2) return detail::dot_avx2(n, x, y);
#endif
  return detail::dot_scalar(n, x, y);
}

double sum_sq(std::size_t n, const double* x) {
#if KGDELTA_HAVE_AVX2
  if (active_isa() == Isa::avx2) return detail::sum_sq_avx2(n, x);
#endif
  return detail::sum_sq_scalar(n, x);
}

double cell_diff_sq(std::size_t n, const double* x) {
#if KGDELTA_HAVE_AVX2
  if (active_isa() == Isa::avx2) return detail::cell_diff_sq_avx2(n, x);
#endif
  return detail::cell_diff_sq_scalar(n, x);
}

void nonlinear_kick(std::size_t n, double c, double pm1, const double* ur,
                    const double* ui, double* vr, double* vi) {
#if KGDELTA_HAVE_AVX2
  if (active_isa() == Isa::avx2)
    return detail::nonlinear_kick_avx2(n, c, pm1, ur, ui, vr, vi);
#endif
  detail::nonlinear_kick_scalar(n, c, pm1, ur, ui, vr, vi);
}

void lap_combine(std::size_t n, double inv_h2, double m2, const double* u,
                 double* out) {
#if KGDELTA_HAVE_AVX2
  if (active_isa() == Isa::avx2)
    return detail::lap_combine_avx2(n, inv_h2, m2, u, out);
#endif
  detail::lap_combine_scalar(n, inv_h2, m2, u, out);
}

}  // namespace kgdelta::kernels
