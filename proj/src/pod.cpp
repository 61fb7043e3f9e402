#include "psp/pod.hpp"

#include "psp/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace psp {

void PODConfig::validate() const {
  if (product_weights.size() < 1) throw ValidationError("PODConfig: p must be >= 1");
  if (order_weights.size() < 1 || order_weights.size() > product_weights.size()) {
    throw ValidationError("PODConfig: need 1 <= K <= p order weights");
  }
  if ((product_weights.array() < 0.0).any()) {
    throw ValidationError("PODConfig: product weights must be >= 0");
  }
  for (int k = 0; k < truncation(); ++k) {
    if (!(order_weights[k] >= 0.0)) throw ValidationError("PODConfig: order weights must be >= 0");
    if (k > 0 && order_weights[k] > order_weights[k - 1]) {
      throw ValidationError("PODConfig: order weights must be non-increasing");
    }
  }
}

Vector PODConfig::exp_decay_weights(int p) {
  const int k_max = std::min(p, 18);
  Vector g(k_max);
  for (int k = 0; k < k_max; ++k) g[k] = std::exp(-double(k + 1));
  return g;
}

PODConfig PODConfig::exp_decay(Vector theta) {
  PODConfig cfg;
  cfg.order_weights = exp_decay_weights(static_cast<int>(theta.size()));
  cfg.product_weights = std::move(theta);
  cfg.validate();
  return cfg;
}

PODConfig PODConfig::first_order(Vector theta) {
  PODConfig cfg;
  cfg.order_weights = Vector::Ones(1);
  cfg.product_weights = std::move(theta);
  cfg.validate();
  return cfg;
}

OmegaDiag compute_omega(const PODConfig& cfg) {
  cfg.validate();
  const int p = cfg.dim();
  const int k_max = cfg.truncation();
  const Vector& theta = cfg.product_weights;
  const Vector& gamma = cfg.order_weights;

  OmegaDiag out;
  out.diag = Vector::Zero(p);

  // Omega_ll = theta_l * sum_k Gamma_k * r_{p,k-1}^{(-l)} with
  //   r_{s,k} = theta_s * r_{s-1,k-1} + r_{s-1,k},   r_{l,k} = r_{l-1,k},
  //   r_{s,0} = 1, r_{s,k} = 0 for k > s.
  // One rolling row over k suffices when k is swept downward.
  Vector r(k_max);
  for (int l = 0; l < p; ++l) {
    r.setZero();
    r[0] = 1.0;
    for (int s = 0; s < p; ++s) {
      if (s == l) continue;
      const double th = theta[s];
      for (int k = k_max - 1; k >= 1; --k) r[k] += th * r[k - 1];
    }
    double acc = 0.0;
    for (int k = 0; k < k_max; ++k) acc += gamma[k] * r[k];
    out.diag[l] = theta[l] * acc;
  }
  return out;
}

OmegaDiag omega_bruteforce(const PODConfig& cfg) {
  cfg.validate();
  const int p = cfg.dim();
  if (p > 20) throw ValidationError("omega_bruteforce: p must be <= 20");
  const int k_max = cfg.truncation();

  OmegaDiag out;
  out.diag = Vector::Zero(p);
  const std::uint32_t full = (p == 32) ? 0xffffffffu : ((1u << p) - 1u);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int order = std::popcount(mask);
    if (order > k_max) continue;
    double weight = cfg.order_weights[order - 1];
    for (int l = 0; l < p; ++l) {
      if (mask & (1u << l)) weight *= cfg.product_weights[l];
    }
    for (int l = 0; l < p; ++l) {
      if (mask & (1u << l)) out.diag[l] += weight;
    }
  }
  return out;
}

Matrix sample_theta(const GammaPrior& prior, int p, int count, std::uint64_t seed) {
  prior.validate();
  if (p < 1 || count < 1) throw ValidationError("sample_theta: p and count must be >= 1");
  Rng rng = make_rng(seed, streams::kTheta);
  // std::gamma_distribution handles shape < 1 correctly (Ahrens-Dieter /
  // Marsaglia-Tsang with boost).
  std::gamma_distribution<double> dist(prior.shape, 1.0 / prior.rate);
  Matrix draws(count, p);
  for (int r = 0; r < count; ++r)
    for (int c = 0; c < p; ++c) draws(r, c) = dist(rng);
  return draws;
}

}  // namespace psp
