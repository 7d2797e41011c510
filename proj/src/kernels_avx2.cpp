// AVX2 variants of the array kernels. Pointwise ops use mul/add (no FMA) in
// the same per-element order as the scalar reference, so they are bit-exact
// against it; reductions reassociate across four lanes.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace kgdelta::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

void axpy_avx2(std::size_t n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    __m256d vx = _mm256_loadu_pd(x + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot_avx2(std::size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_sq_avx2(std::size_t n, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double cell_diff_sq_avx2(std::size_t n, const double* x) {
  if (n == 0) return 0.0;
  double s = x[0] * x[0] + x[n - 1] * x[n - 1];
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 5 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i + 1), _mm256_loadu_pd(x + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  s += hsum(acc);
  for (; i + 1 < n; ++i) {
    const double d = x[i + 1] - x[i];
    s += d * d;
  }
  return s;
}

void nonlinear_kick_avx2(std::size_t n, double c, double pm1, const double* ur,
                         const double* ui, double* vr, double* vi) {
  std::size_t i = 0;
  const __m256d vc = _mm256_set1_pd(c);
  if (pm1 == 2.0) {
    for (; i + 4 <= n; i += 4) {
      __m256d r = _mm256_loadu_pd(ur + i);
      __m256d im = _mm256_loadu_pd(ui + i);
      __m256d r2 = _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(im, im));
      __m256d w = _mm256_mul_pd(vc, r2);
      _mm256_storeu_pd(vr + i, _mm256_add_pd(_mm256_loadu_pd(vr + i), _mm256_mul_pd(w, r)));
      _mm256_storeu_pd(vi + i, _mm256_add_pd(_mm256_loadu_pd(vi + i), _mm256_mul_pd(w, im)));
    }
    for (; i < n; ++i) {
      const double w = c * (ur[i] * ur[i] + ui[i] * ui[i]);
      vr[i] += w * ur[i];
      vi[i] += w * ui[i];
    }
    return;
  }
  if (pm1 == 1.0) {
    for (; i + 4 <= n; i += 4) {
      __m256d r = _mm256_loadu_pd(ur + i);
      __m256d im = _mm256_loadu_pd(ui + i);
      __m256d r2 = _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(im, im));
      __m256d w = _mm256_mul_pd(vc, _mm256_sqrt_pd(r2));
      _mm256_storeu_pd(vr + i, _mm256_add_pd(_mm256_loadu_pd(vr + i), _mm256_mul_pd(w, r)));
      _mm256_storeu_pd(vi + i, _mm256_add_pd(_mm256_loadu_pd(vi + i), _mm256_mul_pd(w, im)));
    }
    for (; i < n; ++i) {
      const double w = c * std::sqrt(ur[i] * ur[i] + ui[i] * ui[i]);
      vr[i] += w * ur[i];
      vi[i] += w * ui[i];
    }
    return;
  }
  // General exponent: no vector pow; match the scalar path exactly.
  const double half = 0.5 * pm1;
  for (; i < n; ++i) {
    const double r2 = ur[i] * ur[i] + ui[i] * ui[i];
    const double w = c * std::pow(r2, half);
    vr[i] += w * ur[i];
    vi[i] += w * ui[i];
  }
}

void lap_combine_avx2(std::size_t n, double inv_h2, double m2, const double* u,
                      double* out) {
  if (n == 0) return;
  const __m256d vh = _mm256_set1_pd(inv_h2);
  const __m256d vm = _mm256_set1_pd(m2);
  const __m256d two = _mm256_set1_pd(2.0);
  out[0] = ((n > 1 ? u[1] : 0.0) - 2.0 * u[0]) * inv_h2 - m2 * u[0];
  std::size_t i = 1;
  for (; i + 5 <= n; i += 4) {
    __m256d um = _mm256_loadu_pd(u + i - 1);
    __m256d uc = _mm256_loadu_pd(u + i);
    __m256d up = _mm256_loadu_pd(u + i + 1);
    // Same association as the scalar kernel: (left - 2 u) + right.
    __m256d lap = _mm256_add_pd(_mm256_sub_pd(um, _mm256_mul_pd(two, uc)), up);
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_mul_pd(lap, vh), _mm256_mul_pd(vm, uc)));
  }
  for (; i < n; ++i) {
    const double left = u[i - 1];
    const double right = (i + 1 < n) ? u[i + 1] : 0.0;
    out[i] = (left - 2.0 * u[i] + right) * inv_h2 - m2 * u[i];
  }
}

}  // namespace kgdelta::kernels::detail
