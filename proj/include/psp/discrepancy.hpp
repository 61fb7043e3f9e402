#pragma once

#include "psp/data.hpp"
#include "psp/kernels.hpp"
#include "psp/types.hpp"

#include <functional>
#include <memory>

namespace psp {

/// D^2 decomposes as data_data - 2*cross + point_point; `value` is
/// sqrt(max(D^2, 0)) with tiny negative cancellation clamped.
struct DiscrepancyReport {
  double value = 0.0;
  double data_data = 0.0;
  double cross = 0.0;
  double point_point = 0.0;
  bool data_term_subsampled = false;

  double squared() const { return data_data - 2.0 * cross + point_point; }
};

/// Computes kernel discrepancies against one dataset, caching the O(N^2)
/// data-data term. For N > data_cap rows that term is estimated from a fixed,
/// evenly strided data_cap-row subsample (flagged in the report); it only
/// shifts D^2 by a constant. The cross term always uses the full data.
class DiscrepancyEvaluator {
 public:
  DiscrepancyEvaluator(const KernelSpec& spec, const Matrix& data,
                       Eigen::Index data_cap = 5000);

  DiscrepancyReport evaluate(const Matrix& points) const;

  bool data_term_subsampled() const { return subsampled_; }
  const Kernel& kernel() const { return *kernel_; }

 private:
  std::unique_ptr<Kernel> kernel_;
  Matrix data_;
  double data_data_ = 0.0;
  bool subsampled_ = false;
};

DiscrepancyReport discrepancy(const KernelSpec& spec, const Dataset& data, const PointSet& ps);

/// Unbiased estimate of the reduction objective: rows of `omegas` are the
/// per-draw Omega diagonals of R sampled kernels, `data_subsample` the N_s
/// resampled data rows.
///   (1/(n^2 R)) sum_ijr gamma_r(x_i, x_j) - (2/(n N_s R)) sum_imr gamma_r(x_i, y_m)
double objective_estimate(const Matrix& omegas, const Matrix& data_subsample,
                          const Matrix& points);

/// |reference_mean - (1/n) sum_i g(x_i)|
double integration_error(const std::function<double(ConstRowRef)>& g, double reference_mean,
                         const PointSet& ps);

struct MaxProResult {
  double value = 0.0;
  bool overflow = false;  // coincident points with lambda = 0
};

/// (1/n^2) sum_{i != j} prod_l 1/((x_il - x_jl)^2 + lambda). Diagnostic only;
/// singular configurations report overflow instead of erroring.
MaxProResult maxpro_criterion(const PointSet& ps, double lambda);

}  // namespace psp
