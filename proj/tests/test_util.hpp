#pragma once

#include "psp/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace psp_test {

inline psp::Matrix random_matrix(int rows, int cols, std::mt19937_64& rng, double lo = -2.0,
                                 double hi = 2.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  psp::Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = dist(rng);
  return m;
}

inline psp::Vector random_vector(int n, std::mt19937_64& rng, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  psp::Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

/// Random non-increasing, nonnegative order weights of length k.
inline psp::Vector random_decaying_weights(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  psp::Vector g(k);
  double level = dist(rng) + 0.1;
  for (int i = 0; i < k; ++i) {
    g[i] = level;
    level *= dist(rng);
  }
  return g;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Kolmogorov-Smirnov distance of a 1-d sample against a CDF.
inline double ks_distance(std::vector<double> sample, double (*cdf)(double)) {
  std::sort(sample.begin(), sample.end());
  const double n = double(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::max(std::abs(double(i + 1) / n - f), std::abs(f - double(i) / n)));
  }
  return d;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    char tmpl[] = "/tmp/psp_test_XXXXXX";
    path = mkdtemp(tmpl);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::trunc);
  f << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs the psp binary (path from the PSP_CLI env var) with the given
/// argument string.
inline CliResult run_cli(const std::string& args, const TempDir& dir) {
  const char* cli = std::getenv("PSP_CLI");
  if (!cli) throw std::runtime_error("PSP_CLI not set");
  const std::string out_path = dir.file("cli_stdout.txt");
  const std::string err_path = dir.file("cli_stderr.txt");
  const std::string cmd =
      std::string(cli) + " " + args + " > " + out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.out = read_file(out_path);
  res.err = read_file(err_path);
  return res;
}

}  // namespace psp_test
