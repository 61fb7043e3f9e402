#pragma once

#include "psp/types.hpp"

namespace psp {

/// Frozen randomness for one blockwise update: R sampled product-weight
/// vectors with their Omega diagonals, the resampled data rows, and the other
/// design points held fixed. The design size n is other_points.rows() + 1.
struct MMContext {
  Matrix thetas;          // R x p
  Matrix omegas;          // R x p, row r = compute_omega(thetas row r)
  Matrix data_subsample;  // N_s x p
  Matrix other_points;    // (n-1) x p, may be empty

  int dim() const { return static_cast<int>(omegas.cols()); }
  int draws() const { return static_cast<int>(omegas.rows()); }
  int design_size() const { return static_cast<int>(other_points.rows()) + 1; }
};

/// Rank-1 curvature bound (4 / (e ||Omega z||^2)) (Omega z)(Omega z)^T; the
/// zero matrix when ||Omega z|| < 1e-12 (the limit direction is undefined and
/// dropping the term keeps the majorization tangent).
Matrix curvature(const Vector& omega, ConstVecRef z);

/// Paraboloid above the shift-invariant kernel, tangent at z':
///   Qbar(z|z') = g' - 2 [g' Omega z']^T (z - z') + 2 (z - z')^T H(z') (z - z')
/// where g' = gamma(z') must be supplied by the caller.
double majorizer(const Vector& omega, double gamma_at_zprime, ConstVecRef z, ConstVecRef zprime);

/// Paraboloid below the kernel, tangent at z':
///   Qlo(z|z') = g' [1 + z'^T Omega z'] - g' z^T Omega z
double minorizer(const Vector& omega, double gamma_at_zprime, ConstVecRef z, ConstVecRef zprime);

/// Blockwise objective for the point being updated (everything else frozen):
///   f_i(x) = (1/(nR)) sum_{j,r} gamma_r(x - x_j) - (1/(N_s R)) sum_{m,r} gamma_r(x - y_m)
double blockwise_objective(const MMContext& ctx, ConstVecRef x);

/// Quadratic surrogate h_i(x | x') majorizing blockwise_objective at x'.
double blockwise_majorizer(const MMContext& ctx, ConstVecRef x, ConstVecRef xprime);

/// Closed-form minimizer of the surrogate: assembles the p x p SPD system
/// and solves it. Throws Error on a singular system (cannot happen with
/// strictly positive weights).
Vector mm_update(const MMContext& ctx, ConstVecRef x_prime);

}  // namespace psp
