#include "psp/bench.hpp"
#include "psp/csv.hpp"
#include "psp/data.hpp"
#include "psp/discrepancy.hpp"
#include "psp/parallel.hpp"
#include "psp/reducers.hpp"
#include "psp/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

using psp::ValidationError;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t chosen = (std::uint64_t(rd()) << 32) ^ std::uint64_t(rd());
  std::fprintf(stderr, "seed: %llu\n", static_cast<unsigned long long>(chosen));
  return chosen;
}

psp::Family parse_family(const std::string& name) {
  if (name == "normal") return psp::Family::Normal;
  if (name == "exp") return psp::Family::Exponential;
  if (name == "beta") return psp::Family::Beta24;
  throw ValidationError("unknown distribution: " + name);
}

int run_reduce(const std::string& input, const std::string& output, int n,
               const std::string& method_name, double nu, double lambda,
               const std::string& order_decay, int ns, int r, int max_sweeps, double tol,
               std::optional<std::uint64_t> seed_opt, bool round, const std::string& init) {
  const auto method = psp::parse_method(method_name);
  if (!method) throw ValidationError("unknown method: " + method_name);
  if (order_decay != "exp" && order_decay != "first") {
    throw ValidationError("--order-decay must be 'exp' or 'first'");
  }
  if (init != "support-points" && init != "random-subsample") {
    throw ValidationError("--init must be 'support-points' or 'random-subsample'");
  }

  const psp::CsvTable table = psp::read_csv_auto(input);
  const psp::Dataset raw = psp::make_dataset(table.values);
  if (raw.n_rows() < 2) throw ValidationError("reduce: need at least 2 data rows");
  const psp::Dataset data = psp::standardize(raw);

  psp::ReducerConfig cfg;
  cfg.method = *method;
  cfg.n = n;
  cfg.subsample = ns;
  cfg.theta_draws = r;
  cfg.max_sweeps = max_sweeps;
  cfg.tol = tol;
  cfg.seed = resolve_seed(seed_opt);
  cfg.prior = psp::GammaPrior{nu, lambda};
  cfg.pod_orders = order_decay == "exp";
  cfg.init = init == "support-points" ? psp::InitScheme::SupportPoints
                                      : psp::InitScheme::RandomSubsample;

  const psp::ReductionResult res = psp::reduce(data, cfg);

  psp::Matrix out;
  if (round) {
    // Nearest rows in standardized coordinates, emitted as the original rows.
    const auto idx = psp::nearest_rows(res.points, data);
    out.resize(static_cast<Eigen::Index>(idx.size()), raw.values.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(Eigen::Index(i)) = raw.values.row(idx[i]);
  } else if (!res.source_rows.empty()) {
    out.resize(static_cast<Eigen::Index>(res.source_rows.size()), raw.values.cols());
    for (std::size_t i = 0; i < res.source_rows.size(); ++i) {
      out.row(Eigen::Index(i)) = raw.values.row(res.source_rows[i]);
    }
  } else {
    out = psp::unstandardize_rows(res.points.points, data);
  }
  psp::write_csv(output, table.header, out);
  std::fprintf(stderr, "reduce: %s n=%d sweeps=%d converged=%s\n", method_name.c_str(), n,
               res.sweeps_used, res.converged ? "yes" : "no");
  return 0;
}

int run_discrepancy(const std::string& data_path, const std::string& points_path,
                    const std::string& kernel_name, double nu, double lambda) {
  const psp::Dataset data = psp::make_dataset(psp::read_csv_auto(data_path).values);
  const psp::Dataset points = psp::make_dataset(psp::read_csv_auto(points_path).values);
  if (data.n_cols() != points.n_cols()) {
    throw ValidationError("discrepancy: data and points dimensions differ");
  }

  psp::KernelSpec spec;
  if (kernel_name == "spin") {
    spec = psp::SpinClosedSpec{nu, lambda};
  } else if (kernel_name == "gaussian") {
    spec = psp::StdGaussianSpec{};
  } else if (kernel_name == "energy") {
    spec = psp::EnergySpec{};
  } else {
    throw ValidationError("unknown kernel: " + kernel_name);
  }

  const psp::DiscrepancyReport rep =
      psp::discrepancy(spec, data, psp::PointSet{points.values});
  nlohmann::json j;
  j["value"] = rep.value;
  j["data_data"] = rep.data_data;
  j["cross"] = rep.cross;
  j["point_point"] = rep.point_point;
  j["data_term_subsampled"] = rep.data_term_subsampled;
  std::printf("%s\n", j.dump().c_str());
  return 0;
}

int run_benchmark(const std::string& dist_name, int p, const std::string& func_name, double q,
                  const std::vector<int>& sizes, const std::vector<std::string>& method_names,
                  int reps, std::optional<std::uint64_t> seed_opt, const std::string& output,
                  Eigen::Index big_n, bool no_timing, bool random_active) {
  psp::ExperimentConfig cfg;
  cfg.dist = psp::DistributionSpec{parse_family(dist_name), p};
  cfg.sizes = sizes;
  cfg.reps = reps;
  cfg.seed = resolve_seed(seed_opt);
  cfg.big_n = big_n;
  cfg.measure_time = !no_timing;
  for (const auto& name : method_names) {
    const auto m = psp::parse_method(name);
    if (!m) throw ValidationError("unknown method: " + name);
    cfg.methods.push_back(*m);
  }

  std::optional<std::uint64_t> shuffle;
  if (random_active) shuffle = psp::mix_seed({cfg.seed, psp::streams::kActiveSet});
  if (func_name == "gapk") {
    const psp::Vector means =
        psp::Vector::Constant(p, psp::marginal_mean(cfg.dist.family));
    cfg.func = psp::TestFunction::gapk(p, q, means, shuffle);
  } else if (func_name == "add") {
    cfg.func = psp::TestFunction::add(p, q, shuffle);
  } else {
    throw ValidationError("unknown test function: " + func_name);
  }

  std::fprintf(stderr, "benchmark: dist=%s p=%d func=%s q=%g active=%d N=%lld reps=%d\n",
               dist_name.c_str(), p, func_name.c_str(), q, cfg.func.active_count(),
               static_cast<long long>(big_n), reps);

  const auto results = psp::run_experiment(cfg);
  psp::write_results_csv(output, results);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projected support points: representative reduction of big high-dimensional data"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (0 = hardware)");

  std::function<int()> task;

  // reduce
  auto* red = app.add_subcommand("reduce", "reduce a CSV dataset to n representative points");
  red->fallthrough();
  struct {
    std::string input, output, method, order_decay = "exp", init = "support-points";
    int n = 0, ns = 0, r = 20, max_sweeps = 200;
    double nu = 0.1, lambda = 0.01, tol = 1e-4;
    std::optional<std::uint64_t> seed;
    bool round = false;
  } ra;
  red->add_option("--input", ra.input, "input CSV")->required();
  red->add_option("--output", ra.output, "output CSV")->required();
  red->add_option("--n", ra.n, "number of reduced points")->required();
  red->add_option("--method", ra.method,
                  "psp-seq|psp-oneshot|herding|support-points|monte-carlo")
      ->required();
  red->add_option("--nu", ra.nu, "Gamma prior shape");
  red->add_option("--lambda", ra.lambda, "Gamma prior rate");
  red->add_option("--order-decay", ra.order_decay, "order weights: exp|first");
  red->add_option("--ns", ra.ns, "data subsample size per update (0 = min(N,100))");
  red->add_option("--r", ra.r, "kernel weight draws per update");
  red->add_option("--max-sweeps", ra.max_sweeps, "sweep cap");
  red->add_option("--tol", ra.tol, "max coordinate displacement for convergence");
  red->add_option("--seed", ra.seed, "RNG seed (omit to draw one)");
  red->add_option("--init", ra.init, "warm start: support-points|random-subsample");
  red->add_flag("--round-to-data", ra.round, "snap outputs to nearest data rows");
  red->callback([&] {
    task = [&] {
      return run_reduce(ra.input, ra.output, ra.n, ra.method, ra.nu, ra.lambda, ra.order_decay,
                        ra.ns, ra.r, ra.max_sweeps, ra.tol, ra.seed, ra.round, ra.init);
    };
  });

  // discrepancy
  auto* dis = app.add_subcommand("discrepancy", "kernel discrepancy between a dataset and points");
  dis->fallthrough();
  struct {
    std::string data, points, kernel;
    double nu = 0.1, lambda = 0.01;
  } da;
  dis->add_option("--data", da.data, "dataset CSV")->required();
  dis->add_option("--points", da.points, "point set CSV")->required();
  dis->add_option("--kernel", da.kernel, "spin|gaussian|energy")->required();
  dis->add_option("--nu", da.nu, "SpIn nu");
  dis->add_option("--lambda", da.lambda, "SpIn lambda");
  dis->callback([&] {
    task = [&] { return run_discrepancy(da.data, da.points, da.kernel, da.nu, da.lambda); };
  });

  // benchmark
  auto* ben = app.add_subcommand("benchmark", "simulation study: error vs n per method");
  ben->fallthrough();
  struct {
    std::string dist, func, output;
    int p = 0, reps = 20;
    double q = 0.2;
    std::vector<int> sizes;
    std::vector<std::string> methods;
    std::optional<std::uint64_t> seed;
    Eigen::Index big_n = 10000;
    bool no_timing = false, random_active = false;
  } ba;
  ben->add_option("--dist", ba.dist, "normal|exp|beta")->required();
  ben->add_option("--p", ba.p, "dimension")->required();
  ben->add_option("--func", ba.func, "gapk|add")->required();
  ben->add_option("--q", ba.q, "active fraction in (0,1]");
  ben->add_option("--sizes", ba.sizes, "reduced sizes, comma separated")
      ->required()
      ->delimiter(',');
  ben->add_option("--methods", ba.methods, "methods, comma separated")
      ->required()
      ->delimiter(',');
  ben->add_option("--reps", ba.reps, "replicates per (method, n)");
  ben->add_option("--seed", ba.seed, "RNG seed (omit to draw one)");
  ben->add_option("--output", ba.output, "results CSV")->required();
  ben->add_option("--big-n", ba.big_n, "big data size per replicate");
  ben->add_flag("--no-timing", ba.no_timing, "emit 0 in the seconds column");
  ben->add_flag("--random-active", ba.random_active, "randomize the active coordinate set");
  ben->callback([&] {
    task = [&] {
      return run_benchmark(ba.dist, ba.p, ba.func, ba.q, ba.sizes, ba.methods, ba.reps, ba.seed,
                           ba.output, ba.big_n, ba.no_timing, ba.random_active);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  psp::set_max_threads(threads);
  try {
    return task ? task() : 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
