#include "psp/reducers.hpp"

#include "psp/discrepancy.hpp"
#include "psp/mm.hpp"
#include "psp/parallel.hpp"
#include "psp/rng.hpp"
#include "psp/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace psp {

namespace {

void validate_config(const Dataset& data, const ReducerConfig& cfg) {
  const Eigen::Index n_data = data.values.rows();
  if (cfg.n < 1 || cfg.n > n_data) throw ValidationError("reduce: need 1 <= n <= N");
  if (cfg.subsample < 0 || cfg.theta_draws < 1) {
    throw ValidationError("reduce: invalid subsample sizes");
  }
  if (!(cfg.tol > 0.0) || cfg.max_sweeps < 1) {
    throw ValidationError("reduce: invalid sweep controls");
  }
  cfg.prior.validate();
}

void require_standardized(const Dataset& data, const char* who) {
  if (!data.standardized) {
    throw ValidationError(std::string(who) + ": data must be standardized");
  }
}

int default_subsample(const ReducerConfig& cfg, Eigen::Index n_data) {
  if (cfg.subsample > 0) return static_cast<int>(std::min<Eigen::Index>(cfg.subsample, n_data));
  return static_cast<int>(std::min<Eigen::Index>(n_data, 100));
}

std::vector<Eigen::Index> sample_without_replacement(Eigen::Index n_data, int k, Rng& rng) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n_data));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(i, n_data - 1);
    std::swap(idx[std::size_t(i)], idx[std::size_t(pick(rng))]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

Matrix rows_by_index(const Matrix& src, const std::vector<Eigen::Index>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), src.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(Eigen::Index(i)) = src.row(idx[i]);
  return out;
}

Matrix sample_rows_iid(const Matrix& src, int k, Rng& rng) {
  std::uniform_int_distribution<Eigen::Index> pick(0, src.rows() - 1);
  Matrix out(k, src.cols());
  for (int i = 0; i < k; ++i) out.row(i) = src.row(pick(rng));
  return out;
}

Matrix drop_row(const Matrix& src, Eigen::Index skip) {
  Matrix out(src.rows() - 1, src.cols());
  Eigen::Index w = 0;
  for (Eigen::Index r = 0; r < src.rows(); ++r) {
    if (r == skip) continue;
    out.row(w++) = src.row(r);
  }
  return out;
}

// Held-out (Y, Omega) pair used only for the objective trace.
struct EvalContext {
  Matrix ysub;
  Matrix omegas;
};

EvalContext make_eval_context(const Matrix& data, const ReducerConfig& cfg) {
  EvalContext ev;
  Rng rng = make_rng(cfg.seed, streams::kEvalContext);
  const int rows = static_cast<int>(
      std::min<Eigen::Index>(data.rows(), std::max(1, cfg.eval_subsample)));
  ev.ysub = sample_rows_iid(data, rows, rng);
  const int draws = std::max(1, cfg.eval_theta_draws);
  const Matrix thetas = sample_theta(cfg.prior, static_cast<int>(data.cols()), draws,
                                     mix_seed({cfg.seed, streams::kEvalContext, 1}));
  ev.omegas = omegas_for_thetas(thetas, cfg.pod_orders);
  return ev;
}

// Stochastic difference-of-convex updates for energy-distance support
// points; shared by the SP baseline and the PSP warm start.
Matrix support_points_core(const Matrix& data, int n, int n_sub, int max_sweeps, double tol,
                           std::uint64_t seed, int* sweeps_used, bool* converged,
                           std::vector<double>* trace, const EvalContext* ev) {
  const Eigen::Index n_data = data.rows();
  const int p = static_cast<int>(data.cols());
  Rng init_rng = make_rng(seed, streams::kInit);
  Matrix pts = rows_by_index(data, sample_without_replacement(n_data, n, init_rng));

  bool done = false;
  int sweep = 0;
  for (; sweep < max_sweeps && !done; ++sweep) {
    double max_disp = 0.0;
    for (int i = 0; i < n; ++i) {
      Rng rng = make_rng(mix_seed({seed, streams::kSubsample, std::uint64_t(sweep)}),
                         streams::kSubsample, std::uint64_t(i));
      const Matrix ysub = sample_rows_iid(data, n_sub, rng);
      const double* xi = pts.row(i).data();

      double inv_sum = 0.0;
      Vector v = Vector::Zero(p);
      for (Eigen::Index m = 0; m < ysub.rows(); ++m) {
        const double dist =
            std::max(std::sqrt(simd::sum_sq_diff(xi, ysub.row(m).data(), p)), 1e-12);
        inv_sum += 1.0 / dist;
        v += ysub.row(m).transpose() / dist;
      }
      Vector u = Vector::Zero(p);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dist = std::sqrt(simd::sum_sq_diff(xi, pts.row(j).data(), p));
        if (dist < 1e-12) continue;  // coincident points exert no direction
        u += (pts.row(i) - pts.row(j)).transpose() / dist;
      }
      const Vector xnew = (v + (double(n_sub) / double(n)) * u) / inv_sum;
      max_disp = std::max(max_disp, (xnew - pts.row(i).transpose()).cwiseAbs().maxCoeff());
      pts.row(i) = xnew;
    }
    if (trace && ev) trace->push_back(objective_estimate(ev->omegas, ev->ysub, pts));
    if (max_disp < tol) done = true;
  }
  if (sweeps_used) *sweeps_used = sweep;
  if (converged) *converged = done;
  return pts;
}

struct FrozenDraw {
  Matrix ysub;
  Matrix thetas;
  Matrix omegas;
};

FrozenDraw make_frozen_draw(const Matrix& data, const ReducerConfig& cfg, int n_sub) {
  FrozenDraw fz;
  if (n_sub >= data.rows()) {
    fz.ysub = data;  // exact objective in frozen mode
  } else {
    Rng rng = make_rng(cfg.seed, streams::kSubsample);
    fz.ysub = sample_rows_iid(data, n_sub, rng);
  }
  fz.thetas = sample_theta(cfg.prior, static_cast<int>(data.cols()), cfg.theta_draws,
                           mix_seed({cfg.seed, streams::kTheta}));
  fz.omegas = omegas_for_thetas(fz.thetas, cfg.pod_orders);
  return fz;
}

MMContext make_update_context(const Matrix& data, const ReducerConfig& cfg, int n_sub,
                              std::uint64_t sweep, std::uint64_t point) {
  MMContext ctx;
  Rng rng = make_rng(mix_seed({cfg.seed, streams::kSubsample, sweep}), streams::kSubsample,
                     point);
  ctx.data_subsample = sample_rows_iid(data, n_sub, rng);
  ctx.thetas = sample_theta(cfg.prior, static_cast<int>(data.cols()), cfg.theta_draws,
                            mix_seed({cfg.seed, streams::kTheta, sweep, point}));
  ctx.omegas = omegas_for_thetas(ctx.thetas, cfg.pod_orders);
  return ctx;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::PspOneshot: return "psp-oneshot";
    case Method::PspSeq: return "psp-seq";
    case Method::Herding: return "herding";
    case Method::SupportPoints: return "support-points";
    case Method::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "psp-oneshot") return Method::PspOneshot;
  if (name == "psp-seq") return Method::PspSeq;
  if (name == "herding") return Method::Herding;
  if (name == "support-points") return Method::SupportPoints;
  if (name == "monte-carlo") return Method::MonteCarlo;
  return std::nullopt;
}

ReductionResult psp_oneshot(const Dataset& data, const ReducerConfig& cfg) {
  validate_config(data, cfg);
  require_standardized(data, "psp_oneshot");
  const Matrix& big = data.values;
  const int n = cfg.n;
  const int n_sub = default_subsample(cfg, big.rows());

  Matrix pts;
  if (cfg.init == InitScheme::SupportPoints) {
    // Full SP convergence is unnecessary for a warm start; 20 sweeps suffice.
    pts = support_points_core(big, n, n_sub, 20, cfg.tol,
                              mix_seed({cfg.seed, streams::kWarmStart}), nullptr, nullptr,
                              nullptr, nullptr);
  } else {
    Rng rng = make_rng(cfg.seed, streams::kInit);
    pts = rows_by_index(big, sample_without_replacement(big.rows(), n, rng));
  }

  const EvalContext ev = make_eval_context(big, cfg);
  FrozenDraw frozen;
  if (!cfg.resample) frozen = make_frozen_draw(big, cfg, n_sub);

  ReductionResult res;
  bool done = false;
  int sweep = 0;
  for (; sweep < cfg.max_sweeps && !done; ++sweep) {
    double max_disp = 0.0;
    auto build_context = [&](int i) {
      MMContext ctx;
      if (cfg.resample) {
        ctx = make_update_context(big, cfg, n_sub, std::uint64_t(sweep), std::uint64_t(i));
      } else {
        ctx.data_subsample = frozen.ysub;
        ctx.thetas = frozen.thetas;
        ctx.omegas = frozen.omegas;
      }
      return ctx;
    };
    if (cfg.parallel_sweep) {
      // Jacobi-style sweep: every point updated from the previous sweep's
      // values, so updates are independent and run in parallel.
      const Matrix staged = pts;
      std::vector<double> disp(static_cast<std::size_t>(n), 0.0);
      parallel_blocks(n, 4, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
          MMContext ctx = build_context(static_cast<int>(i));
          ctx.other_points = drop_row(staged, i);
          const Vector xnew = mm_update(ctx, staged.row(i).transpose());
          disp[static_cast<std::size_t>(i)] =
              (xnew - staged.row(i).transpose()).cwiseAbs().maxCoeff();
          pts.row(i) = xnew;
        }
      });
      max_disp = *std::max_element(disp.begin(), disp.end());
    } else {
      for (int i = 0; i < n; ++i) {
        MMContext ctx = build_context(i);
        ctx.other_points = drop_row(pts, i);
        const Vector xnew = mm_update(ctx, pts.row(i).transpose());
        max_disp = std::max(max_disp, (xnew - pts.row(i).transpose()).cwiseAbs().maxCoeff());
        pts.row(i) = xnew;
      }
    }
    if (cfg.resample) {
      res.objective_trace.push_back(objective_estimate(ev.omegas, ev.ysub, pts));
    } else {
      res.objective_trace.push_back(objective_estimate(frozen.omegas, frozen.ysub, pts));
    }
    if (max_disp < cfg.tol) done = true;
  }

  res.points.points = std::move(pts);
  res.sweeps_used = sweep;
  res.converged = done;
  return res;
}

ReductionResult psp_seq(const Dataset& data, const ReducerConfig& cfg) {
  validate_config(data, cfg);
  require_standardized(data, "psp_seq");
  const Matrix& big = data.values;
  const int n = cfg.n;
  const int n_sub = default_subsample(cfg, big.rows());
  const int max_inner = 100;

  const EvalContext ev = make_eval_context(big, cfg);

  ReductionResult res;
  res.converged = true;
  Matrix pts(n, big.cols());

  for (int i = 0; i < n; ++i) {
    Rng init_rng = make_rng(cfg.seed, streams::kSeqInit, std::uint64_t(i));
    std::uniform_int_distribution<Eigen::Index> pick(0, big.rows() - 1);
    Vector x = big.row(pick(init_rng)).transpose();

    if (i > 0) {  // the first point is a raw data draw
      bool inner_done = false;
      for (int iter = 0; iter < max_inner && !inner_done; ++iter) {
        MMContext ctx =
            make_update_context(big, cfg, n_sub, std::uint64_t(iter), std::uint64_t(i));
        ctx.other_points = pts.topRows(i);
        const Vector xnew = mm_update(ctx, x);
        if ((xnew - x).cwiseAbs().maxCoeff() < cfg.tol) inner_done = true;
        x = xnew;
      }
      if (!inner_done) res.converged = false;
    }
    pts.row(i) = x;
    res.objective_trace.push_back(objective_estimate(ev.omegas, ev.ysub, pts.topRows(i + 1)));
  }

  res.points.points = std::move(pts);
  res.sweeps_used = n;
  return res;
}

ReductionResult herding(const Dataset& data, const ReducerConfig& cfg) {
  validate_config(data, cfg);
  const Matrix& big = data.values;
  const int p = static_cast<int>(big.cols());
  const int n = cfg.n;

  // Candidate set: the data rows themselves, capped at 10^4 per the usual
  // practical reading of the argmax over the sample space.
  std::vector<Eigen::Index> cand_idx;
  if (big.rows() > 10000) {
    Rng rng = make_rng(cfg.seed, streams::kHerding);
    cand_idx = sample_without_replacement(big.rows(), 10000, rng);
    std::sort(cand_idx.begin(), cand_idx.end());
  } else {
    cand_idx.resize(static_cast<std::size_t>(big.rows()));
    std::iota(cand_idx.begin(), cand_idx.end(), Eigen::Index{0});
  }
  const Matrix cand = rows_by_index(big, cand_idx);
  const Eigen::Index n_cand = cand.rows();

  const KernelSpec spec = cfg.herding_kernel.value_or(KernelSpec{StdGaussianSpec{}});
  const auto kernel = compile_kernel(spec, p);

  Vector mean_to_data(n_cand);
  parallel_blocks(n_cand, 64, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t c = lo; c < hi; ++c) {
      double acc = 0.0;
      for (Eigen::Index m = 0; m < big.rows(); ++m) {
        acc += kernel->eval(cand.row(c).data(), big.row(m).data(), p);
      }
      mean_to_data[c] = acc / double(big.rows());
    }
  });

  const EvalContext ev = make_eval_context(big, cfg);

  ReductionResult res;
  res.converged = true;
  Matrix pts(n, p);
  Vector sum_selected = Vector::Zero(n_cand);
  for (int k = 0; k < n; ++k) {
    Eigen::Index best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < n_cand; ++c) {
      const double score = mean_to_data[c] - sum_selected[c] / double(k + 1);
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    pts.row(k) = cand.row(best);
    res.source_rows.push_back(cand_idx[static_cast<std::size_t>(best)]);
    parallel_blocks(n_cand, 256, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
      for (std::int64_t c = lo; c < hi; ++c) {
        sum_selected[c] += kernel->eval(cand.row(c).data(), pts.row(k).data(), p);
      }
    });
    res.objective_trace.push_back(objective_estimate(ev.omegas, ev.ysub, pts.topRows(k + 1)));
  }

  res.points.points = std::move(pts);
  res.sweeps_used = n;
  return res;
}

ReductionResult support_points(const Dataset& data, const ReducerConfig& cfg) {
  validate_config(data, cfg);
  require_standardized(data, "support_points");
  const Matrix& big = data.values;
  const int n_sub = default_subsample(cfg, big.rows());
  const EvalContext ev = make_eval_context(big, cfg);

  ReductionResult res;
  res.points.points =
      support_points_core(big, cfg.n, n_sub, cfg.max_sweeps, cfg.tol, cfg.seed,
                          &res.sweeps_used, &res.converged, &res.objective_trace, &ev);
  return res;
}

ReductionResult monte_carlo(const Dataset& data, const ReducerConfig& cfg) {
  validate_config(data, cfg);
  Rng rng = make_rng(cfg.seed, streams::kMonteCarlo);
  ReductionResult res;
  res.source_rows = sample_without_replacement(data.values.rows(), cfg.n, rng);
  res.points.points = rows_by_index(data.values, res.source_rows);
  res.sweeps_used = 1;
  res.converged = true;
  const EvalContext ev = make_eval_context(data.values, cfg);
  res.objective_trace.push_back(objective_estimate(ev.omegas, ev.ysub, res.points.points));
  return res;
}

ReductionResult reduce(const Dataset& data, const ReducerConfig& cfg) {
  switch (cfg.method) {
    case Method::PspOneshot: return psp_oneshot(data, cfg);
    case Method::PspSeq: return psp_seq(data, cfg);
    case Method::Herding: return herding(data, cfg);
    case Method::SupportPoints: return support_points(data, cfg);
    case Method::MonteCarlo: return monte_carlo(data, cfg);
  }
  throw ValidationError("reduce: unknown method");
}

}  // namespace psp
