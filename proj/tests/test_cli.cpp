#include "psp/csv.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <random>
#include <vector>

using psp_test::CliResult;
using psp_test::TempDir;
using psp_test::run_cli;
using psp_test::write_file;

namespace {

std::string make_input(const TempDir& dir, int rows, unsigned seed, bool header = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::string body = header ? "a,b\n" : "";
  for (int i = 0; i < rows; ++i) {
    body += psp::format_double(unif(rng)) + "," + psp::format_double(unif(rng)) + "\n";
  }
  const std::string path = dir.file("input.csv");
  write_file(path, body);
  return path;
}

std::vector<std::vector<double>> sorted_rows(const psp::Matrix& m) {
  std::vector<std::vector<double>> rows;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row;
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

TEST_CASE("reduce with monte-carlo at n = N permutes the input") {
  TempDir dir;
  const std::string input = make_input(dir, 25, 1);
  const std::string output = dir.file("out.csv");
  const std::string before = psp_test::read_file(input);

  const CliResult res = run_cli("reduce --input " + input + " --n 25 --method monte-carlo" +
                                    " --seed 3 --output " + output,
                                dir);
  CHECK(res.exit_code == 0);
  CHECK(psp_test::read_file(input) == before);  // inputs are never mutated

  const psp::CsvTable in = psp::read_csv(input, true);
  const psp::CsvTable out = psp::read_csv(output, true);
  CHECK(out.header == in.header);
  CHECK(sorted_rows(out.values) == sorted_rows(in.values));
}

TEST_CASE("reduce --round-to-data emits only input rows") {
  TempDir dir;
  const std::string input = make_input(dir, 60, 2);
  const std::string output = dir.file("rounded.csv");
  const CliResult res =
      run_cli("reduce --input " + input + " --n 8 --method psp-seq --seed 4" +
                  " --max-sweeps 20 --round-to-data --output " + output,
              dir);
  REQUIRE(res.exit_code == 0);
  const psp::CsvTable in = psp::read_csv(input, true);
  const psp::CsvTable out = psp::read_csv(output, true);
  REQUIRE(out.values.rows() == 8);
  const auto all = sorted_rows(in.values);
  for (Eigen::Index r = 0; r < out.values.rows(); ++r) {
    std::vector<double> row = {out.values(r, 0), out.values(r, 1)};
    CHECK(std::binary_search(all.begin(), all.end(), row));
  }
}

TEST_CASE("reduce accepts the full flag grammar") {
  TempDir dir;
  const std::string input = make_input(dir, 40, 9);
  const std::string output = dir.file("full.csv");
  const CliResult res = run_cli(
      "reduce --input " + input +
          " --n 5 --method psp-oneshot --nu 0.1 --lambda 0.01 --order-decay exp"
          " --ns 30 --r 8 --max-sweeps 15 --tol 1e-4 --seed 77 --round-to-data --output " +
          output,
      dir);
  REQUIRE(res.exit_code == 0);
  CHECK(psp::read_csv(output, true).values.rows() == 5);
}

TEST_CASE("reduce flag validation exits with code 2") {
  TempDir dir;
  CHECK(run_cli("reduce --n 5 --method monte-carlo --output x.csv", dir).exit_code == 2);

  const std::string input = make_input(dir, 10, 3);
  CHECK(run_cli("reduce --input " + input + " --n 5 --method bogus --output " +
                    dir.file("y.csv"),
                dir)
            .exit_code == 2);
  CHECK(run_cli("reduce --input " + input + " --n 50 --method monte-carlo --seed 1 --output " +
                    dir.file("z.csv"),
                dir)
            .exit_code == 2);  // n > N
}

TEST_CASE("omitting --seed reports the chosen seed") {
  TempDir dir;
  const std::string input = make_input(dir, 12, 5);
  const CliResult res = run_cli("reduce --input " + input +
                                    " --n 3 --method monte-carlo --output " + dir.file("o.csv"),
                                dir);
  CHECK(res.exit_code == 0);
  CHECK(res.err.find("seed:") != std::string::npos);
}

TEST_CASE("discrepancy subcommand emits the report as JSON") {
  TempDir dir;
  const std::string data = dir.file("data.csv");
  write_file(data, "0\n1\n");
  const std::string points = dir.file("points.csv");
  write_file(points, "0.5\n");

  CliResult res = run_cli("discrepancy --data " + data + " --points " + points +
                              " --kernel gaussian",
                          dir);
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.3554).epsilon(2e-4));
  CHECK(j["data_data"].get<double>() > 0.0);
  CHECK(j.contains("cross"));
  CHECK(j.contains("point_point"));

  // identical files give zero discrepancy
  res = run_cli("discrepancy --data " + data + " --points " + data + " --kernel spin", dir);
  REQUIRE(res.exit_code == 0);
  CHECK(nlohmann::json::parse(res.out)["value"].get<double>() <= 1e-9);

  // dimension mismatch is a validation failure
  const std::string wide = dir.file("wide.csv");
  write_file(wide, "0,1\n");
  CHECK(run_cli("discrepancy --data " + data + " --points " + wide + " --kernel spin", dir)
            .exit_code == 2);
}

TEST_CASE("benchmark subcommand: row count, logging, reproducibility") {
  TempDir dir;
  const std::string out1 = dir.file("b1.csv");
  const std::string args =
      "benchmark --dist normal --p 20 --func gapk --q 0.2 --sizes 10 "
      "--methods monte-carlo --reps 1 --seed 11 --big-n 300 --no-timing --output ";
  CliResult res = run_cli(args + out1, dir);
  REQUIRE(res.exit_code == 0);
  CHECK(res.err.find("active=4") != std::string::npos);  // 0.25/(q p) bookkeeping

  const std::string content = psp_test::read_file(out1);
  CHECK(std::count(content.begin(), content.end(), '\n') == 2);  // header + 1 row

  const std::string out2 = dir.file("b2.csv");
  res = run_cli(args + out2, dir);
  REQUIRE(res.exit_code == 0);
  CHECK(psp_test::read_file(out2) == content);  // same seed, same bytes
}
