#pragma once

#include "psp/types.hpp"

#include <cstdint>

namespace psp {

/// Gamma(shape, rate) prior on the per-variable product weights; mean is
/// shape/rate. Small shape values (< 1) concentrate mass near zero, which is
/// what encodes the sparsity assumption.
struct GammaPrior {
  double shape = 0.1;
  double rate = 0.01;

  void validate() const {
    if (!(shape > 0.0) || !(rate > 0.0)) {
      throw ValidationError("GammaPrior: shape and rate must be > 0");
    }
  }
};

/// Product-and-order weights: theta_u = order_weights[|u|] * prod_{l in u}
/// product_weights[l], truncated to |u| <= order_weights.size().
struct PODConfig {
  Vector product_weights;  // theta_l >= 0
  Vector order_weights;    // Gamma_1..Gamma_K, non-increasing

  int dim() const { return static_cast<int>(product_weights.size()); }
  int truncation() const { return static_cast<int>(order_weights.size()); }

  void validate() const;

  /// Gamma_k = exp(-k), truncated at K = min(p, 18); exp(-19) < 1e-8 so the
  /// dropped tail is far below test tolerances.
  static PODConfig exp_decay(Vector theta);

  /// Gamma_1 = 1, higher orders zero: the anisotropic kernel family.
  static PODConfig first_order(Vector theta);

  static Vector exp_decay_weights(int p);
};

/// Diagonal of Omega_theta: entry l is the sum of theta_u over all subsets u
/// containing l.
struct OmegaDiag {
  Vector diag;
};

/// Recursive evaluation, O(K*p) per entry / O(K*p^2) total.
OmegaDiag compute_omega(const PODConfig& cfg);

/// Direct summation over all nonempty subsets with |u| <= K. Exponential in
/// p; guarded at p <= 20. Test oracle for compute_omega.
OmegaDiag omega_bruteforce(const PODConfig& cfg);

/// count i.i.d. draws of the p product weights from the prior, one draw per
/// row. Correct for shape < 1.
Matrix sample_theta(const GammaPrior& prior, int p, int count, std::uint64_t seed);

}  // namespace psp
