#include "psp/kernels.hpp"

#include "psp/simd.hpp"

#include <cmath>

namespace psp {

PodGaussianKernel::PodGaussianKernel(const PODConfig& cfg)
    : Kernel(cfg.dim()), omega_(compute_omega(cfg).diag) {}

double PodGaussianKernel::eval(const double* x, const double* y, int p) const {
  return std::exp(-simd::sum_sq_diff_weighted(x, y, omega_.data(), p));
}

AnisoGaussianKernel::AnisoGaussianKernel(Vector theta)
    : Kernel(static_cast<int>(theta.size())), theta_(std::move(theta)) {
  if ((theta_.array() < 0.0).any()) {
    throw ValidationError("aniso kernel: weights must be >= 0");
  }
}

double AnisoGaussianKernel::eval(const double* x, const double* y, int p) const {
  return std::exp(-simd::sum_sq_diff_weighted(x, y, theta_.data(), p));
}

double StdGaussianKernel::eval(const double* x, const double* y, int p) const {
  return std::exp(-simd::sum_sq_diff(x, y, p));
}

SpinClosedKernel::SpinClosedKernel(int p, double nu, double lambda)
    : Kernel(p), nu_(nu), lambda_(lambda), zeros_(Vector::Zero(p)) {
  if (!(nu > 0.0) || !(lambda > 0.0)) {
    throw ValidationError("spin kernel: nu and lambda must be > 0");
  }
  // Same chunked-log path as eval so that gamma(x, x) == 1 exactly.
  log_norm_ = simd::log_sum_shifted_sq_diff(zeros_.data(), zeros_.data(), lambda_, p);
}

double SpinClosedKernel::eval(const double* x, const double* y, int p) const {
  const double s = simd::log_sum_shifted_sq_diff(x, y, lambda_, p);
  return std::exp(nu_ * (log_norm_ - s));
}

SampledPodKernel::SampledPodKernel(Matrix omegas)
    : Kernel(static_cast<int>(omegas.cols())), omegas_(std::move(omegas)) {
  if (omegas_.rows() < 1) throw ValidationError("sampled kernel: need >= 1 draw");
}

double SampledPodKernel::eval(const double* x, const double* y, int p) const {
  double acc = 0.0;
  for (Eigen::Index r = 0; r < omegas_.rows(); ++r) {
    acc += std::exp(-simd::sum_sq_diff_weighted(x, y, omegas_.row(r).data(), p));
  }
  return acc / double(omegas_.rows());
}

double EnergyKernel::eval(const double* x, const double* y, int p) const {
  return -std::sqrt(simd::sum_sq_diff(x, y, p));
}

Matrix omegas_for_thetas(const Matrix& thetas, bool pod_orders) {
  if (!pod_orders) return thetas;  // Omega_ll = Gamma_1 * theta_l with Gamma_1 = 1
  Matrix omegas(thetas.rows(), thetas.cols());
  for (Eigen::Index r = 0; r < thetas.rows(); ++r) {
    omegas.row(r) = compute_omega(PODConfig::exp_decay(thetas.row(r).transpose())).diag;
  }
  return omegas;
}

std::unique_ptr<Kernel> compile_kernel(const KernelSpec& spec, int p) {
  if (p < 1) throw ValidationError("kernel: dimension must be >= 1");
  struct Compiler {
    int p;
    std::unique_ptr<Kernel> operator()(const PodGaussianSpec& s) const {
      if (s.pod.dim() != p) throw ValidationError("kernel: POD config dimension mismatch");
      return std::make_unique<PodGaussianKernel>(s.pod);
    }
    std::unique_ptr<Kernel> operator()(const AnisoGaussianSpec& s) const {
      if (static_cast<int>(s.theta.size()) != p) {
        throw ValidationError("kernel: weight dimension mismatch");
      }
      return std::make_unique<AnisoGaussianKernel>(s.theta);
    }
    std::unique_ptr<Kernel> operator()(const StdGaussianSpec&) const {
      return std::make_unique<StdGaussianKernel>(p);
    }
    std::unique_ptr<Kernel> operator()(const SpinClosedSpec& s) const {
      return std::make_unique<SpinClosedKernel>(p, s.nu, s.lambda);
    }
    std::unique_ptr<Kernel> operator()(const SpinSampledSpec& s) const {
      const Matrix thetas = sample_theta(s.prior, p, s.samples, s.seed);
      return std::make_unique<SampledPodKernel>(omegas_for_thetas(thetas, s.pod_orders));
    }
    std::unique_ptr<Kernel> operator()(const EnergySpec&) const {
      return std::make_unique<EnergyKernel>(p);
    }
  };
  return std::visit(Compiler{p}, spec);
}

double kernel_eval(const KernelSpec& spec, ConstRowRef x, ConstRowRef y) {
  if (x.size() != y.size()) throw ValidationError("kernel: dimension mismatch");
  return (*compile_kernel(spec, static_cast<int>(x.size())))(x, y);
}

double pod_shift_invariant(const Vector& omega, ConstVecRef z) {
  if (omega.size() != z.size()) throw ValidationError("kernel: dimension mismatch");
  const Vector zero = Vector::Zero(z.size());
  return std::exp(-simd::sum_sq_diff_weighted(z.data(), zero.data(), omega.data(),
                                              static_cast<int>(z.size())));
}

double pod_shift_invariant(const PODConfig& cfg, ConstVecRef z) {
  return pod_shift_invariant(compute_omega(cfg).diag, z);
}

double spin_sampled_eval(const GammaPrior& prior, int samples, std::uint64_t seed,
                         ConstRowRef x, ConstRowRef y) {
  if (x.size() != y.size()) throw ValidationError("kernel: dimension mismatch");
  const int p = static_cast<int>(x.size());
  SampledPodKernel kernel(sample_theta(prior, p, samples, seed));
  return kernel(x, y);
}

}  // namespace psp
