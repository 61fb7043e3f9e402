#include "psp/discrepancy.hpp"

#include "psp/parallel.hpp"
#include "psp/simd.hpp"

#include <cmath>
#include <cstdio>

namespace psp {

namespace {

constexpr std::int64_t kRowBlock = 128;

// Mean kernel value over a x b, accumulated row-by-row over b. Self and
// cross terms share this exact summation pattern, so for a point set that IS
// the dataset the three Eq.-(3) terms cancel bitwise and D comes out 0.
double mean_cross_kernel(const Kernel& k, const Matrix& a, const Matrix& b) {
  const int p = static_cast<int>(a.cols());
  const double total =
      parallel_block_sum(b.rows(), kRowBlock, [&](std::int64_t lo, std::int64_t hi) {
        double acc = 0.0;
        for (std::int64_t m = lo; m < hi; ++m) {
          const double* ym = b.row(m).data();
          double row = 0.0;
          for (Eigen::Index i = 0; i < a.rows(); ++i) {
            row += k.eval(a.row(i).data(), ym, p);
          }
          acc += row;
        }
        return acc;
      });
  return total / (double(a.rows()) * double(b.rows()));
}

double mean_self_kernel(const Kernel& k, const Matrix& rows) {
  return mean_cross_kernel(k, rows, rows);
}

}  // namespace

DiscrepancyEvaluator::DiscrepancyEvaluator(const KernelSpec& spec, const Matrix& data,
                                           Eigen::Index data_cap)
    : kernel_(compile_kernel(spec, static_cast<int>(data.cols()))), data_(data) {
  if (data.rows() < 1) throw ValidationError("discrepancy: empty dataset");
  Matrix basis;
  if (data_cap > 0 && data.rows() > data_cap) {
    subsampled_ = true;
    basis.resize(data_cap, data.cols());
    for (Eigen::Index i = 0; i < data_cap; ++i) {
      basis.row(i) = data.row((i * data.rows()) / data_cap);
    }
  } else {
    basis = data;
  }
  data_data_ = mean_self_kernel(*kernel_, basis);
}

DiscrepancyReport DiscrepancyEvaluator::evaluate(const Matrix& points) const {
  if (points.cols() != data_.cols()) throw ValidationError("discrepancy: dimension mismatch");
  if (points.rows() < 1) throw ValidationError("discrepancy: empty point set");
  DiscrepancyReport rep;
  rep.data_data = data_data_;
  rep.data_term_subsampled = subsampled_;
  rep.cross = mean_cross_kernel(*kernel_, points, data_);
  rep.point_point = mean_self_kernel(*kernel_, points);
  const double sq = rep.squared();
  if (sq < -1e-8) {
    std::fprintf(stderr, "warning: discrepancy^2 = %.3e clamped to 0\n", sq);
  }
  rep.value = std::sqrt(std::max(sq, 0.0));
  return rep;
}

DiscrepancyReport discrepancy(const KernelSpec& spec, const Dataset& data, const PointSet& ps) {
  return DiscrepancyEvaluator(spec, data.values).evaluate(ps.points);
}

double objective_estimate(const Matrix& omegas, const Matrix& data_subsample,
                          const Matrix& points) {
  const int p = static_cast<int>(points.cols());
  if (omegas.cols() != p || data_subsample.cols() != p) {
    throw ValidationError("objective_estimate: dimension mismatch");
  }
  const SampledPodKernel k(omegas);
  const Eigen::Index n = points.rows();

  const double self =
      parallel_block_sum(n, kRowBlock, [&](std::int64_t lo, std::int64_t hi) {
        double acc = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) {
          const double* xi = points.row(i).data();
          for (Eigen::Index j = i + 1; j < n; ++j) acc += k.eval(xi, points.row(j).data(), p);
        }
        return acc;
      });
  double diag = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    diag += k.eval(points.row(i).data(), points.row(i).data(), p);
  }
  const double cross =
      parallel_block_sum(data_subsample.rows(), kRowBlock,
                         [&](std::int64_t lo, std::int64_t hi) {
                           double acc = 0.0;
                           for (std::int64_t m = lo; m < hi; ++m) {
                             const double* ym = data_subsample.row(m).data();
                             for (Eigen::Index i = 0; i < n; ++i) {
                               acc += k.eval(points.row(i).data(), ym, p);
                             }
                           }
                           return acc;
                         });

  const double nn = double(n);
  return (2.0 * self + diag) / (nn * nn) -
         2.0 * cross / (nn * double(data_subsample.rows()));
}

double integration_error(const std::function<double(ConstRowRef)>& g, double reference_mean,
                         const PointSet& ps) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ps.points.rows(); ++i) acc += g(ps.points.row(i));
  return std::abs(reference_mean - acc / double(ps.points.rows()));
}

MaxProResult maxpro_criterion(const PointSet& ps, double lambda) {
  const Eigen::Index n = ps.points.rows();
  const int p = static_cast<int>(ps.points.cols());
  if (n < 2) throw ValidationError("maxpro: need at least 2 points");
  if (lambda < 0.0) throw ValidationError("maxpro: lambda must be >= 0");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double s = simd::log_sum_shifted_sq_diff(ps.points.row(i).data(),
                                                     ps.points.row(j).data(), lambda, p);
      acc += std::exp(-s);  // prod_l 1/((x_il - x_jl)^2 + lambda)
    }
  }
  MaxProResult r;
  r.value = 2.0 * acc / (double(n) * double(n));
  r.overflow = !std::isfinite(r.value);
  return r;
}

}  // namespace psp
