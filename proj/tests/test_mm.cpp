#include "psp/mm.hpp"

#include "psp/discrepancy.hpp"
#include "psp/kernels.hpp"
#include "psp/rng.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace psp;

namespace {

Vector random_omega(int p, std::mt19937_64& rng) {
  return psp_test::random_vector(p, rng, 0.0, 2.0);
}

double gamma_shift(const Vector& omega, const Vector& z) {
  return std::exp(-omega.cwiseProduct(z).dot(z));
}

MMContext random_context(std::mt19937_64& rng, int n_other, int n_sub, int r, int p) {
  MMContext ctx;
  ctx.thetas = psp_test::random_matrix(r, p, rng, 0.0, 2.0);
  ctx.omegas.resize(r, p);
  for (int i = 0; i < r; ++i) {
    ctx.omegas.row(i) =
        compute_omega(PODConfig::exp_decay(ctx.thetas.row(i).transpose())).diag;
  }
  ctx.data_subsample = psp_test::random_matrix(n_sub, p, rng);
  ctx.other_points = psp_test::random_matrix(n_other, p, rng);
  return ctx;
}

}  // namespace

TEST_CASE("curvature: hand value, zero rule, trace identity") {
  Vector omega1(1), z1(1);
  omega1 << 1.0;
  z1 << 2.0;
  const Matrix c1 = curvature(omega1, z1);
  CHECK(c1(0, 0) == doctest::Approx(4.0 / std::exp(1.0)).epsilon(1e-14));

  CHECK(curvature(omega1, Vector::Zero(1)).isZero());

  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    const Vector omega = psp_test::random_vector(3, rng, 0.1, 2.0);
    const Vector z = psp_test::random_vector(3, rng, 0.5, 2.0);
    CHECK(curvature(omega, z).trace() == doctest::Approx(4.0 / std::exp(1.0)).epsilon(1e-12));
  }
}

TEST_CASE("paraboloids are tangent at z = z'") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + int(trial % 5);
    const Vector omega = random_omega(p, rng);
    const Vector z = psp_test::random_vector(p, rng);
    const double g = gamma_shift(omega, z);
    CHECK(majorizer(omega, g, z, z) == doctest::Approx(g).epsilon(1e-12));
    CHECK(minorizer(omega, g, z, z) == doctest::Approx(g).epsilon(1e-12));
  }
}

TEST_CASE("majorizer at z' = 0 is the constant 1") {
  std::mt19937_64 rng(53);
  const Vector omega = random_omega(4, rng);
  const Vector zero = Vector::Zero(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector z = psp_test::random_vector(4, rng, -5.0, 5.0);
    CHECK(majorizer(omega, 1.0, z, zero) == 1.0);
  }
}

TEST_CASE("minorizer with zero weights is constant gamma(z')") {
  std::mt19937_64 rng(54);
  const Vector zero_omega = Vector::Zero(3);
  const Vector zp = psp_test::random_vector(3, rng);
  const double g = gamma_shift(zero_omega, zp);  // = 1
  const Vector z = psp_test::random_vector(3, rng);
  CHECK(minorizer(zero_omega, g, z, zp) == doctest::Approx(g));
}

TEST_CASE("sandwich: minorizer <= kernel <= majorizer") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 2000; ++trial) {
    const int p = 1 + int(trial % 5);
    PODConfig cfg;
    cfg.product_weights = psp_test::random_vector(p, rng, 0.0, 2.0);
    std::uniform_int_distribution<int> kd(1, p);
    cfg.order_weights = psp_test::random_decaying_weights(kd(rng), rng);
    const Vector omega = compute_omega(cfg).diag;

    const Vector z = psp_test::random_vector(p, rng);
    const Vector zp = psp_test::random_vector(p, rng);
    const double g = gamma_shift(omega, z);
    const double gp = gamma_shift(omega, zp);
    CHECK(majorizer(omega, gp, z, zp) >= g - 1e-10);
    CHECK(minorizer(omega, gp, z, zp) <= g + 1e-10);
  }
}

TEST_CASE("mm_update with one data point and no neighbours returns it") {
  std::mt19937_64 rng(56);
  MMContext ctx = random_context(rng, 0, 1, 1, 3);
  const Vector xp = psp_test::random_vector(3, rng);
  const Vector out = mm_update(ctx, xp);
  CHECK((out - ctx.data_subsample.row(0).transpose()).norm() < 1e-10);
}

TEST_CASE("mm_update respects symmetry of the subsample") {
  std::mt19937_64 rng(57);
  MMContext ctx = random_context(rng, 0, 2, 2, 2);
  const Vector a = psp_test::random_vector(2, rng, 0.5, 1.5);
  ctx.data_subsample.row(0) = a.transpose();
  ctx.data_subsample.row(1) = -a.transpose();
  const Vector out = mm_update(ctx, Vector::Zero(2));
  CHECK(out.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mm_update is the stationary point of the surrogate") {
  std::mt19937_64 rng(58);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<int> nd(1, 4), sd(2, 8), rd(1, 3), pd(1, 4);
    const int p = pd(rng);
    MMContext ctx = random_context(rng, nd(rng), sd(rng), rd(rng), p);
    const Vector xp = psp_test::random_vector(p, rng);
    const Vector out = mm_update(ctx, xp);

    const double h = 1e-5;
    Vector grad(p);
    for (int c = 0; c < p; ++c) {
      Vector hi = out, lo = out;
      hi[c] += h;
      lo[c] -= h;
      grad[c] = (blockwise_majorizer(ctx, hi, xp) - blockwise_majorizer(ctx, lo, xp)) /
                (2.0 * h);
    }
    CHECK(grad.norm() < 1e-6);
  }
}

TEST_CASE("mm descent: objective never increases through an update") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<int> nd(0, 4), sd(2, 8), rd(1, 3), pd(1, 4);
    const int p = pd(rng);
    MMContext ctx = random_context(rng, nd(rng), sd(rng), rd(rng), p);
    const Vector xp = psp_test::random_vector(p, rng);
    const Vector out = mm_update(ctx, xp);

    // surrogate and blockwise objective both descend
    CHECK(blockwise_majorizer(ctx, out, xp) <= blockwise_majorizer(ctx, xp, xp) + 1e-9);
    CHECK(blockwise_objective(ctx, out) <= blockwise_objective(ctx, xp) + 1e-9);

    // and so does the full subsampled objective over the whole design
    const int n = ctx.design_size();
    Matrix design(n, p);
    design.topRows(n - 1) = ctx.other_points;
    design.row(n - 1) = xp.transpose();
    const double before = objective_estimate(ctx.omegas, ctx.data_subsample, design);
    design.row(n - 1) = out.transpose();
    const double after = objective_estimate(ctx.omegas, ctx.data_subsample, design);
    CHECK(after <= before + 1e-9);
  }
}

TEST_CASE("tangency of the blockwise surrogate") {
  std::mt19937_64 rng(60);
  MMContext ctx = random_context(rng, 3, 5, 2, 3);
  const Vector xp = psp_test::random_vector(3, rng);
  CHECK(blockwise_majorizer(ctx, xp, xp) ==
        doctest::Approx(blockwise_objective(ctx, xp)).epsilon(1e-12));
}

TEST_CASE("context validation") {
  MMContext ctx;
  ctx.thetas = Matrix::Ones(1, 2);
  ctx.omegas = Matrix::Ones(1, 3);  // mismatched
  ctx.data_subsample = Matrix::Ones(1, 3);
  CHECK_THROWS_AS(mm_update(ctx, Vector::Zero(3)), ValidationError);
}
