#include "psp/simd.hpp"

#ifdef PSP_HAVE_AVX2_TU

#include <immintrin.h>

#include <cmath>

namespace psp::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hprod(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_mul_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_mul_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

double sum_sq_diff(const double* a, const double* b, int n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d, d, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double sum_sq_diff_weighted(const double* a, const double* b, const double* w, int n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(d0, d0), _mm256_loadu_pd(w + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_mul_pd(d1, d1), _mm256_loadu_pd(w + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(d, d), _mm256_loadu_pd(w + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += w[i] * d * d;
  }
  return acc;
}

double log_sum_shifted_sq_diff(const double* a, const double* b, double shift, int n) {
  const __m256d vshift = _mm256_set1_pd(shift);
  double total = 0.0;
  int i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    const __m256d t0 = _mm256_add_pd(_mm256_mul_pd(d0, d0), vshift);
    const __m256d t1 = _mm256_add_pd(_mm256_mul_pd(d1, d1), vshift);
    total += std::log(hprod(_mm256_mul_pd(t0, t1)));
  }
  if (i < n) {
    double prod = 1.0;
    for (; i < n; ++i) {
      const double d = a[i] - b[i];
      prod *= d * d + shift;
    }
    total += std::log(prod);
  }
  return total;
}

}  // namespace psp::simd::avx2

#endif  // PSP_HAVE_AVX2_TU
