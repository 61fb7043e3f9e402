#include "psp/simd.hpp"

#include <algorithm>
#include <cmath>

namespace psp::simd::scalar {

double sum_sq_diff(const double* a, const double* b, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double sum_sq_diff_weighted(const double* a, const double* b, const double* w, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += w[i] * d * d;
  }
  return acc;
}

double log_sum_shifted_sq_diff(const double* a, const double* b, double shift, int n) {
  // Chunks of 8 keep the partial products far from the double range limits
  // for any sane inputs while amortizing the log calls.
  double total = 0.0;
  int i = 0;
  while (i < n) {
    const int end = std::min(n, i + 8);
    double prod = 1.0;
    for (; i < end; ++i) {
      const double d = a[i] - b[i];
      prod *= d * d + shift;
    }
    total += std::log(prod);
  }
  return total;
}

}  // namespace psp::simd::scalar
