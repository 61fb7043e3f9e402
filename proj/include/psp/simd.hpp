#pragma once

namespace psp::simd {

enum class Backend { Scalar, Avx2 };

/// Backend currently wired into the dispatch table. Chosen once at startup
/// from CPU capabilities, overridable via force_backend() or the PSP_SIMD
/// environment variable (values: scalar, avx2, auto).
Backend active_backend();
const char* backend_name(Backend b);
void force_backend(Backend b);
bool avx2_available();

/// sum_l (a_l - b_l)^2
double sum_sq_diff(const double* a, const double* b, int n);

/// sum_l w_l (a_l - b_l)^2
double sum_sq_diff_weighted(const double* a, const double* b, const double* w, int n);

/// sum_l log((a_l - b_l)^2 + shift), evaluated as logs of short-chunk
/// products so only n/8 log calls are made. A zero factor yields -inf,
/// which callers map to the correct kernel limit.
double log_sum_shifted_sq_diff(const double* a, const double* b, double shift, int n);

// Reference implementations, callable directly for equivalence tests.
namespace scalar {
double sum_sq_diff(const double* a, const double* b, int n);
double sum_sq_diff_weighted(const double* a, const double* b, const double* w, int n);
double log_sum_shifted_sq_diff(const double* a, const double* b, double shift, int n);
}  // namespace scalar

namespace avx2 {
double sum_sq_diff(const double* a, const double* b, int n);
double sum_sq_diff_weighted(const double* a, const double* b, const double* w, int n);
double log_sum_shifted_sq_diff(const double* a, const double* b, double shift, int n);
}  // namespace avx2

}  // namespace psp::simd
