#include "psp/mm.hpp"

#include "psp/simd.hpp"

#include <cmath>

namespace psp {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e
constexpr double kCurvatureFloor = 1e-12;      // ||Omega z|| below this => zero curvature

inline double pod_gamma(const double* x, const double* y, const double* omega, int p) {
  return std::exp(-simd::sum_sq_diff_weighted(x, y, omega, p));
}

inline double pod_gamma_shift(const Vector& omega, const Vector& z) {
  return std::exp(-omega.cwiseProduct(z).dot(z));
}

void check_context(const MMContext& ctx) {
  if (ctx.draws() < 1 || ctx.data_subsample.rows() < 1) {
    throw ValidationError("mm: need R >= 1 and N_s >= 1");
  }
  if (ctx.thetas.rows() != ctx.omegas.rows() || ctx.thetas.cols() != ctx.omegas.cols() ||
      ctx.data_subsample.cols() != ctx.omegas.cols() ||
      (ctx.other_points.rows() > 0 && ctx.other_points.cols() != ctx.omegas.cols())) {
    throw ValidationError("mm: context dimension mismatch");
  }
}

}  // namespace

Matrix curvature(const Vector& omega, ConstVecRef z) {
  if (omega.size() != z.size()) throw ValidationError("curvature: dimension mismatch");
  const Vector w = omega.cwiseProduct(z);
  const double s = w.squaredNorm();
  if (std::sqrt(s) < kCurvatureFloor) return Matrix::Zero(z.size(), z.size());
  return (4.0 * kInvE / s) * (w * w.transpose());
}

double majorizer(const Vector& omega, double gamma_at_zprime, ConstVecRef z,
                 ConstVecRef zprime) {
  const Vector d = z - zprime;
  const Vector wp = omega.cwiseProduct(zprime);
  const double s = wp.squaredNorm();
  double quad = 0.0;
  if (std::sqrt(s) >= kCurvatureFloor) {
    const double proj = wp.dot(d);
    quad = 2.0 * (4.0 * kInvE / s) * proj * proj;
  }
  return gamma_at_zprime - 2.0 * gamma_at_zprime * wp.dot(d) + quad;
}

double minorizer(const Vector& omega, double gamma_at_zprime, ConstVecRef z,
                 ConstVecRef zprime) {
  const double zp_quad = zprime.cwiseProduct(omega).dot(zprime);
  const double z_quad = z.cwiseProduct(omega).dot(z);
  return gamma_at_zprime * (1.0 + zp_quad) - gamma_at_zprime * z_quad;
}

double blockwise_objective(const MMContext& ctx, ConstVecRef x) {
  check_context(ctx);
  const int p = ctx.dim();
  const int r_count = ctx.draws();
  const double n = double(ctx.design_size());

  double attract = 0.0;
  for (Eigen::Index m = 0; m < ctx.data_subsample.rows(); ++m) {
    for (int r = 0; r < r_count; ++r) {
      attract += pod_gamma(x.data(), ctx.data_subsample.row(m).data(),
                           ctx.omegas.row(r).data(), p);
    }
  }
  double repel = 0.0;
  for (Eigen::Index j = 0; j < ctx.other_points.rows(); ++j) {
    for (int r = 0; r < r_count; ++r) {
      repel += pod_gamma(x.data(), ctx.other_points.row(j).data(), ctx.omegas.row(r).data(), p);
    }
  }
  return repel / (n * r_count) -
         attract / (double(ctx.data_subsample.rows()) * r_count);
}

double blockwise_majorizer(const MMContext& ctx, ConstVecRef x, ConstVecRef xprime) {
  check_context(ctx);
  const int r_count = ctx.draws();
  const double n = double(ctx.design_size());

  double upper = 0.0;
  for (Eigen::Index j = 0; j < ctx.other_points.rows(); ++j) {
    const Vector z = x - ctx.other_points.row(j).transpose();
    const Vector zp = xprime - ctx.other_points.row(j).transpose();
    for (int r = 0; r < r_count; ++r) {
      const Vector omega = ctx.omegas.row(r).transpose();
      upper += majorizer(omega, pod_gamma_shift(omega, zp), z, zp);
    }
  }
  double lower = 0.0;
  for (Eigen::Index m = 0; m < ctx.data_subsample.rows(); ++m) {
    const Vector z = x - ctx.data_subsample.row(m).transpose();
    const Vector zp = xprime - ctx.data_subsample.row(m).transpose();
    for (int r = 0; r < r_count; ++r) {
      const Vector omega = ctx.omegas.row(r).transpose();
      lower += minorizer(omega, pod_gamma_shift(omega, zp), z, zp);
    }
  }
  return upper / (n * r_count) -
         lower / (double(ctx.data_subsample.rows()) * r_count);
}

Vector mm_update(const MMContext& ctx, ConstVecRef x_prime) {
  check_context(ctx);
  const int p = ctx.dim();
  if (x_prime.size() != p) throw ValidationError("mm_update: dimension mismatch");
  const int r_count = ctx.draws();
  const Eigen::Index n_sub = ctx.data_subsample.rows();
  const double n = double(ctx.design_size());

  const double c_data = 2.0 / (double(n_sub) * r_count);
  const double c_pts = 2.0 / (n * r_count);
  const double c_curv = 4.0 / (n * r_count);

  Vector diag = Vector::Zero(p);      // sum_m sum_r gamma Omega_r
  Vector b = Vector::Zero(p);
  Matrix curv = Matrix::Zero(p, p);   // sum_{j,r} (4/(e s)) w w^T

  Vector s_accum(p);
  for (Eigen::Index m = 0; m < n_sub; ++m) {
    const double* ym = ctx.data_subsample.row(m).data();
    s_accum.setZero();
    for (int r = 0; r < r_count; ++r) {
      const double g = pod_gamma(x_prime.data(), ym, ctx.omegas.row(r).data(), p);
      if (g > 0.0) s_accum += g * ctx.omegas.row(r).transpose();
    }
    diag += s_accum;
    b += c_data * s_accum.cwiseProduct(ctx.data_subsample.row(m).transpose());
  }

  Vector w(p);
  for (Eigen::Index j = 0; j < ctx.other_points.rows(); ++j) {
    const Vector z = x_prime - ctx.other_points.row(j).transpose();
    s_accum.setZero();
    for (int r = 0; r < r_count; ++r) {
      const Vector omega = ctx.omegas.row(r).transpose();
      const double g = pod_gamma(x_prime.data(), ctx.other_points.row(j).data(),
                                 ctx.omegas.row(r).data(), p);
      if (g > 0.0) s_accum += g * omega;
      w = omega.cwiseProduct(z);
      const double s = w.squaredNorm();
      if (std::sqrt(s) >= kCurvatureFloor) {
        curv.noalias() += (4.0 * kInvE / s) * (w * w.transpose());
      }
    }
    b += c_pts * s_accum.cwiseProduct(z);
  }

  Matrix a = c_curv * curv;
  a.diagonal() += c_data * diag;
  b.noalias() += c_curv * (curv * x_prime);

  const Eigen::LDLT<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error("mm_update: factorization failed (singular system)");
  }
  const Vector out = solver.solve(b);
  if (!out.allFinite() || (a * out - b).norm() > 1e-8 * (1.0 + b.norm())) {
    throw Error("mm_update: singular system (all kernel weights vanished?)");
  }
  return out;
}

}  // namespace psp
