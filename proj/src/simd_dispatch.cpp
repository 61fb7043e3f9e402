#include "psp/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace psp::simd {

namespace {

struct Table {
  double (*sum_sq_diff)(const double*, const double*, int);
  double (*sum_sq_diff_weighted)(const double*, const double*, const double*, int);
  double (*log_sum_shifted_sq_diff)(const double*, const double*, double, int);
};

constexpr Table kScalarTable{&scalar::sum_sq_diff, &scalar::sum_sq_diff_weighted,
                             &scalar::log_sum_shifted_sq_diff};

#ifdef PSP_HAVE_AVX2_TU
constexpr Table kAvx2Table{&avx2::sum_sq_diff, &avx2::sum_sq_diff_weighted,
                           &avx2::log_sum_shifted_sq_diff};
#endif

std::atomic<const Table*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void install(Backend b) {
#ifdef PSP_HAVE_AVX2_TU
  if (b == Backend::Avx2 && cpu_has_avx2()) {
    g_table.store(&kAvx2Table, std::memory_order_release);
    g_backend.store(Backend::Avx2, std::memory_order_release);
    return;
  }
#endif
  g_table.store(&kScalarTable, std::memory_order_release);
  g_backend.store(Backend::Scalar, std::memory_order_release);
}

const Table* table() {
  const Table* t = g_table.load(std::memory_order_acquire);
  if (t) return t;
  Backend pick = Backend::Avx2;
  if (const char* env = std::getenv("PSP_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) pick = Backend::Scalar;
  }
  install(pick);
  return g_table.load(std::memory_order_acquire);
}

}  // namespace

bool avx2_available() {
#ifdef PSP_HAVE_AVX2_TU
  return cpu_has_avx2();
#else
  return false;
#endif
}

Backend active_backend() {
  table();
  return g_backend.load(std::memory_order_acquire);
}

const char* backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) { install(b); }

double sum_sq_diff(const double* a, const double* b, int n) {
  return table()->sum_sq_diff(a, b, n);
}

double sum_sq_diff_weighted(const double* a, const double* b, const double* w, int n) {
  return table()->sum_sq_diff_weighted(a, b, w, n);
}

double log_sum_shifted_sq_diff(const double* a, const double* b, double shift, int n) {
  return table()->log_sum_shifted_sq_diff(a, b, shift, n);
}

}  // namespace psp::simd
