#pragma once

#include "psp/pod.hpp"
#include "psp/types.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <variant>

namespace psp {

// ---------------------------------------------------------------------------
// Kernel specifications (plain config, cheap to copy)
// ---------------------------------------------------------------------------

/// exp{-sum_u theta_u ||x_u - y_u||^2} with POD weights; evaluated through
/// the identity sum_u theta_u ||z_u||^2 = sum_l Omega_ll z_l^2.
struct PodGaussianSpec {
  PODConfig pod;
};

/// exp{-sum_l theta_l (x_l - y_l)^2}
struct AnisoGaussianSpec {
  Vector theta;
};

/// Anisotropic kernel with all weights 1.
struct StdGaussianSpec {};

/// prod_l {lambda / ((x_l - y_l)^2 + lambda)}^nu -- the Gamma-prior average
/// of the anisotropic kernel, normalized so gamma(x, x) = 1.
struct SpinClosedSpec {
  double nu = 0.1;
  double lambda = 0.01;
};

/// Monte Carlo average of the Gaussian kernel over `samples` product-weight
/// draws from `prior`. With pod_orders = false the anisotropic form is
/// averaged (matching SpinClosedSpec in expectation); with pod_orders = true
/// each draw uses the full POD form with exp(-k) order decay.
struct SpinSampledSpec {
  GammaPrior prior;
  int samples = 100;
  std::uint64_t seed = 1;
  bool pod_orders = false;
};

/// gamma(x, y) = -||x - y||_2 (energy distance / support points).
struct EnergySpec {};

using KernelSpec = std::variant<PodGaussianSpec, AnisoGaussianSpec, StdGaussianSpec,
                                SpinClosedSpec, SpinSampledSpec, EnergySpec>;

// ---------------------------------------------------------------------------
// Compiled evaluators
// ---------------------------------------------------------------------------

/// A kernel bound to a fixed dimension with any derived state (Omega
/// diagonals, sampled weights) precomputed. Evaluation is pure and reentrant.
class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual double eval(const double* x, const double* y, int p) const = 0;
  virtual std::string name() const = 0;

  int dim() const { return p_; }

  double operator()(ConstRowRef x, ConstRowRef y) const {
    if (x.size() != p_ || y.size() != p_) throw ValidationError("kernel: dimension mismatch");
    return eval(x.data(), y.data(), p_);
  }

 protected:
  explicit Kernel(int p) : p_(p) {}
  int p_;
};

class PodGaussianKernel final : public Kernel {
 public:
  PodGaussianKernel(const PODConfig& cfg);
  double eval(const double* x, const double* y, int p) const override;
  std::string name() const override { return "pod-gaussian"; }
  const Vector& omega() const { return omega_; }

 private:
  Vector omega_;
};

class AnisoGaussianKernel final : public Kernel {
 public:
  explicit AnisoGaussianKernel(Vector theta);
  double eval(const double* x, const double* y, int p) const override;
  std::string name() const override { return "aniso-gaussian"; }

 private:
  Vector theta_;
};

class StdGaussianKernel final : public Kernel {
 public:
  explicit StdGaussianKernel(int p) : Kernel(p) {}
  double eval(const double* x, const double* y, int p) const override;
  std::string name() const override { return "std-gaussian"; }
};

class SpinClosedKernel final : public Kernel {
 public:
  SpinClosedKernel(int p, double nu, double lambda);
  double eval(const double* x, const double* y, int p) const override;
  std::string name() const override { return "spin-closed"; }

 private:
  double nu_;
  double lambda_;
  double log_norm_;  // sum_l log(lambda), chunked exactly like eval
  Vector zeros_;
};

/// Mixture-of-Gaussians form (1/R) sum_r exp(-sum_l omega_rl z_l^2); rows of
/// `omegas` are per-draw Omega diagonals.
class SampledPodKernel final : public Kernel {
 public:
  explicit SampledPodKernel(Matrix omegas);
  double eval(const double* x, const double* y, int p) const override;
  std::string name() const override { return "spin-sampled"; }
  const Matrix& omegas() const { return omegas_; }

 private:
  Matrix omegas_;
};

class EnergyKernel final : public Kernel {
 public:
  explicit EnergyKernel(int p) : Kernel(p) {}
  double eval(const double* x, const double* y, int p) const override;
  std::string name() const override { return "energy"; }
};

std::unique_ptr<Kernel> compile_kernel(const KernelSpec& spec, int p);

/// One-off evaluation; compiles the spec on the fly.
double kernel_eval(const KernelSpec& spec, ConstRowRef x, ConstRowRef y);

/// Shift-invariant POD kernel value gamma_theta(z) = exp(-z' Omega z).
double pod_shift_invariant(const PODConfig& cfg, ConstVecRef z);
double pod_shift_invariant(const Vector& omega, ConstVecRef z);

/// (1/R) sum_r gamma_{theta_r}(x, y) with anisotropic draws from the prior;
/// unbiased for the closed-form SpIn kernel.
double spin_sampled_eval(const GammaPrior& prior, int samples, std::uint64_t seed,
                         ConstRowRef x, ConstRowRef y);

/// Per-draw Omega rows for a sampled-theta matrix (used by reducers and the
/// sampled kernel): identity for first-order weights, compute_omega otherwise.
Matrix omegas_for_thetas(const Matrix& thetas, bool pod_orders);

}  // namespace psp
