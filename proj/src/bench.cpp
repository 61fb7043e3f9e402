#include "psp/bench.hpp"

#include "psp/csv.hpp"
#include "psp/discrepancy.hpp"
#include "psp/parallel.hpp"
#include "psp/rng.hpp"
#include "psp/simd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace psp {

namespace {

Vector pod_coefficients(int p, double q, std::optional<std::uint64_t> shuffle_seed) {
  if (p < 1) throw ValidationError("test function: p must be >= 1");
  if (!(q > 0.0) || q > 1.0) throw ValidationError("test function: q must be in (0, 1]");
  const int active = static_cast<int>(std::ceil(q * p));
  const double value = 0.25 / (q * double(p));
  Vector coeffs = Vector::Zero(p);
  std::vector<int> slots(static_cast<std::size_t>(p));
  std::iota(slots.begin(), slots.end(), 0);
  if (shuffle_seed) {
    Rng rng = make_rng(*shuffle_seed, streams::kActiveSet);
    std::shuffle(slots.begin(), slots.end(), rng);
  }
  for (int i = 0; i < active; ++i) coeffs[slots[static_cast<std::size_t>(i)]] = value;
  return coeffs;
}

}  // namespace

TestFunction TestFunction::gapk(int p, double q, Vector means,
                                std::optional<std::uint64_t> shuffle_seed) {
  if (static_cast<int>(means.size()) != p) {
    throw ValidationError("gapk: means dimension mismatch");
  }
  TestFunction f;
  f.kind = TestFunctionKind::Gapk;
  f.q = q;
  f.coeffs = pod_coefficients(p, q, shuffle_seed);
  f.coeffs_sq = f.coeffs.array().square();
  f.means = std::move(means);
  return f;
}

TestFunction TestFunction::add(int p, double q, std::optional<std::uint64_t> shuffle_seed) {
  TestFunction f;
  f.kind = TestFunctionKind::Add;
  f.q = q;
  f.coeffs = pod_coefficients(p, q, shuffle_seed);
  f.coeffs_sq = f.coeffs.array().square();
  f.means = Vector::Zero(p);
  return f;
}

double TestFunction::operator()(ConstRowRef x) const {
  if (x.size() != coeffs.size()) throw ValidationError("test function: dimension mismatch");
  if (kind == TestFunctionKind::Gapk) {
    return std::exp(-simd::sum_sq_diff_weighted(x.data(), means.data(), coeffs_sq.data(),
                                                dim()));
  }
  return std::exp(-coeffs.dot(x.transpose()));
}

int TestFunction::active_count() const {
  return static_cast<int>((coeffs.array() > 0.0).count());
}

double marginal_mean(Family f) {
  switch (f) {
    case Family::Normal: return 0.0;
    case Family::Exponential: return 1.0;
    case Family::Beta24: return 1.0 / 3.0;
  }
  return 0.0;
}

ReferenceMean reference_mean(const TestFunction& f, const DistributionSpec& spec,
                             std::int64_t count, std::uint64_t seed) {
  if (count < 1) throw ValidationError("reference_mean: count must be >= 1");
  if (f.dim() != spec.p) throw ValidationError("reference_mean: dimension mismatch");
  Rng rng = make_rng(seed, streams::kSample);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::gamma_distribution<double> ga(2.0, 1.0);
  std::gamma_distribution<double> gb(4.0, 1.0);

  Eigen::RowVectorXd row(spec.p);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t i = 0; i < count; ++i) {
    for (int c = 0; c < spec.p; ++c) {
      switch (spec.family) {
        case Family::Normal: row[c] = normal(rng); break;
        case Family::Exponential: row[c] = expo(rng); break;
        case Family::Beta24: {
          const double x = ga(rng);
          const double y = gb(rng);
          row[c] = x / (x + y);
          break;
        }
      }
    }
    const double g = f(row);
    const double delta = g - mean;
    mean += delta / double(i + 1);
    m2 += delta * (g - mean);
  }
  ReferenceMean out;
  out.value = mean;
  out.count = count;
  out.std_error = count > 1 ? std::sqrt(m2 / double(count - 1) / double(count)) : 0.0;
  return out;
}

std::vector<ExperimentResult> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.methods.empty() || cfg.sizes.empty() || cfg.reps < 1) {
    throw ValidationError("run_experiment: need methods, sizes, reps >= 1");
  }
  if (cfg.func.dim() != cfg.dist.p) {
    throw ValidationError("run_experiment: test function dimension mismatch");
  }
  for (int n : cfg.sizes) {
    if (n < 1 || n > cfg.big_n) throw ValidationError("run_experiment: need 1 <= n <= N");
  }

  const ReferenceMean ref = reference_mean(
      cfg.func, cfg.dist, cfg.reference_count, mix_seed({cfg.seed, streams::kBenchReference}));

  const KernelSpec metric = SpinClosedSpec{cfg.base.prior.shape, cfg.base.prior.rate};
  const int n_sizes = static_cast<int>(cfg.sizes.size());
  const int n_methods = static_cast<int>(cfg.methods.size());
  const int n_tasks = n_sizes * cfg.reps;

  std::vector<ExperimentResult> results(
      static_cast<std::size_t>(n_methods) * static_cast<std::size_t>(n_tasks));
  auto slot = [&](int method_idx, int size_idx, int rep) -> ExperimentResult& {
    return results[static_cast<std::size_t>(method_idx) * n_tasks +
                   static_cast<std::size_t>(size_idx) * cfg.reps + static_cast<std::size_t>(rep)];
  };

  // One task per (n, rep): draws the shared big data once and runs every
  // method on it. Tasks are independent and their seeds are derived, so the
  // schedule cannot affect the results.
  parallel_blocks(n_tasks, 1, [&](std::int64_t task, std::int64_t, std::int64_t) {
    const int size_idx = static_cast<int>(task) / cfg.reps;
    const int rep = static_cast<int>(task) % cfg.reps;
    const int n = cfg.sizes[static_cast<std::size_t>(size_idx)];

    const Dataset raw = sample(cfg.dist, cfg.big_n,
                               mix_seed({cfg.seed, streams::kBenchData, std::uint64_t(n),
                                         std::uint64_t(rep)}));
    const Dataset std_data = standardize(raw);
    const DiscrepancyEvaluator evaluator(metric, std_data.values);

    for (int mi = 0; mi < n_methods; ++mi) {
      ReducerConfig rcfg = cfg.base;
      rcfg.method = cfg.methods[static_cast<std::size_t>(mi)];
      rcfg.n = n;
      rcfg.seed = mix_seed({cfg.seed, streams::kBenchMethod, std::uint64_t(mi),
                            std::uint64_t(n), std::uint64_t(rep)});

      const auto t0 = std::chrono::steady_clock::now();
      const ReductionResult red = reduce(std_data, rcfg);
      const auto t1 = std::chrono::steady_clock::now();

      const Matrix original_units = unstandardize_rows(red.points.points, std_data);
      ExperimentResult& row = slot(mi, size_idx, rep);
      row.method = rcfg.method;
      row.n = n;
      row.rep = rep;
      row.error = integration_error([&](ConstRowRef x) { return cfg.func(x); }, ref.value,
                                    PointSet{original_units});
      row.discrepancy = evaluator.evaluate(red.points.points).value;
      row.seconds = cfg.measure_time
                        ? std::chrono::duration<double>(t1 - t0).count()
                        : 0.0;
    }
  });

  return results;
}

void write_results_csv(const std::string& path, const std::vector<ExperimentResult>& results) {
  std::ostringstream out;
  out << "method,n,rep,error,discrepancy,seconds\n";
  for (const auto& r : results) {
    out << method_name(r.method) << ',' << r.n << ',' << r.rep << ','
        << format_double(r.error) << ',' << format_double(r.discrepancy) << ','
        << format_double(r.seconds) << '\n';
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::trunc);
    if (!f) throw Error("cannot write file: " + tmp);
    f << out.str();
    if (!f.good()) throw Error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot replace " + path + ": " + ec.message());
  }
}

}  // namespace psp
