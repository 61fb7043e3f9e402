#pragma once

#include "psp/data.hpp"
#include "psp/kernels.hpp"
#include "psp/pod.hpp"
#include "psp/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace psp {

enum class Method { PspOneshot, PspSeq, Herding, SupportPoints, MonteCarlo };

const char* method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

enum class InitScheme { SupportPoints, RandomSubsample };

struct ReducerConfig {
  Method method = Method::PspSeq;
  int n = 0;
  int subsample = 0;     // N_s; 0 means min(N, 100)
  int theta_draws = 20;  // R
  int max_sweeps = 200;
  double tol = 1e-4;     // max coordinate displacement, standardized units
  std::uint64_t seed = 0;
  GammaPrior prior{};
  bool pod_orders = true;  // exp(-k) order decay; false averages the anisotropic kernel
  InitScheme init = InitScheme::SupportPoints;

  // Diagnostics. resample = false freezes one (Y, theta) draw for every
  // update, which makes the PSP objective trace exactly non-increasing.
  // When frozen and N_s >= N the subsample is the full dataset.
  bool resample = true;

  // Experimental: update all points from the previous sweep's values instead
  // of blockwise-in-place. Changes the algorithm; off by default.
  bool parallel_sweep = false;

  // Held-out context for the objective trace.
  int eval_subsample = 256;
  int eval_theta_draws = 4;

  std::optional<KernelSpec> herding_kernel;  // default: standard Gaussian
};

struct ReductionResult {
  PointSet points;
  int sweeps_used = 0;
  std::vector<double> objective_trace;  // one subsampled-objective value per sweep
  bool converged = false;
  std::vector<Eigen::Index> source_rows;  // dataset row per point, when points are rows
};

/// Blockwise MM over all n points with per-update resampling (one-shot PSPs).
ReductionResult psp_oneshot(const Dataset& data, const ReducerConfig& cfg);

/// Greedy point-by-point PSPs; extensible: the first n points of a longer run
/// with the same seed are bit-identical.
ReductionResult psp_seq(const Dataset& data, const ReducerConfig& cfg);

/// Greedy kernel herding over the data rows as candidate set.
ReductionResult herding(const Dataset& data, const ReducerConfig& cfg);

/// Energy-distance support points via subsampled difference-of-convex MM.
ReductionResult support_points(const Dataset& data, const ReducerConfig& cfg);

/// Uniform n-subset without replacement.
ReductionResult monte_carlo(const Dataset& data, const ReducerConfig& cfg);

ReductionResult reduce(const Dataset& data, const ReducerConfig& cfg);

}  // namespace psp
