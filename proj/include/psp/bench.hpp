#pragma once

#include "psp/data.hpp"
#include "psp/reducers.hpp"
#include "psp/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace psp {

enum class TestFunctionKind { Gapk, Add };

/// The two downstream integrands: GAPK g(x) = exp{-sum_l a_l^2 (x_l - u_l)^2}
/// and ADD g(x) = exp{-sum_l b_l x_l}, with a_l = b_l = 0.25/(q p) on the
/// ceil(q p) active coordinates and 0 elsewhere. Active coordinates are the
/// leading ones unless a shuffle seed asks for a random active set.
struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::Gapk;
  double q = 1.0;
  Vector coeffs;         // alpha or beta
  Vector means;          // u (GAPK only; zero for ADD)
  Vector coeffs_sq;      // alpha^2, precomputed for GAPK

  static TestFunction gapk(int p, double q, Vector means,
                           std::optional<std::uint64_t> shuffle_seed = {});
  static TestFunction add(int p, double q, std::optional<std::uint64_t> shuffle_seed = {});

  double operator()(ConstRowRef x) const;
  int dim() const { return static_cast<int>(coeffs.size()); }
  int active_count() const;
};

/// Analytic marginal mean of each supported family (u_l for GAPK).
double marginal_mean(Family f);

struct ReferenceMean {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t count = 0;
};

/// Streaming Monte Carlo estimate of E_F[g] with its standard error.
ReferenceMean reference_mean(const TestFunction& f, const DistributionSpec& spec,
                             std::int64_t count, std::uint64_t seed);

struct ExperimentResult {
  Method method = Method::MonteCarlo;
  int n = 0;
  int rep = 0;
  double error = 0.0;        // integration error vs the reference mean
  double discrepancy = 0.0;  // SpIn closed-form discrepancy, standardized coords
  double seconds = 0.0;      // reduction wall time; 0 when timing is off
};

struct ExperimentConfig {
  std::vector<Method> methods;
  DistributionSpec dist;
  TestFunction func;
  std::vector<int> sizes;
  int reps = 20;
  std::uint64_t seed = 0;
  Eigen::Index big_n = 10000;
  std::int64_t reference_count = 1000000;
  ReducerConfig base;       // seed/n/method are overwritten per task
  bool measure_time = true; // false pins the seconds column to 0 for reproducible CSVs
};

/// One row per (method, n, rep), ordered that way. Big data is drawn fresh
/// per (n, rep) and shared by all methods of that replicate; every random
/// stream is derived from cfg.seed, so output is bit-identical across runs
/// and thread counts.
std::vector<ExperimentResult> run_experiment(const ExperimentConfig& cfg);

/// Columns: method,n,rep,error,discrepancy,seconds
void write_results_csv(const std::string& path, const std::vector<ExperimentResult>& results);

}  // namespace psp
