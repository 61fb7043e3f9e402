#include "psp/data.hpp"

#include "psp/csv.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace psp;
using psp_test::TempDir;
using psp_test::write_file;

TEST_CASE("load_csv reads rectangular numeric files") {
  TempDir dir;
  const std::string path = dir.file("d.csv");

  write_file(path, "0,0\n1,1\n2,2\n");
  Dataset d = load_csv(path, false);
  CHECK(d.n_rows() == 3);
  CHECK(d.n_cols() == 2);
  CHECK(d.values(2, 1) == 2.0);
  CHECK_FALSE(d.standardized);

  write_file(path, "x,y\n0.5,1.5\n");
  d = load_csv(path, true);
  CHECK(d.n_rows() == 1);
  CHECK(d.values(0, 0) == 0.5);
}

TEST_CASE("load_csv rejects bad cells with their location") {
  TempDir dir;
  const std::string path = dir.file("bad.csv");

  write_file(path, "1,2\n3,nan\n");
  CHECK_THROWS_WITH_AS(load_csv(path, false), doctest::Contains("row 2, column 2"),
                       ValidationError);

  write_file(path, "1,2\n3\n");
  CHECK_THROWS_AS(load_csv(path, false), ValidationError);

  write_file(path, "");
  CHECK_THROWS_AS(load_csv(path, false), ValidationError);
}

TEST_CASE("standardize uses the sample std with divisor n-1") {
  Matrix values(2, 1);
  values << 0.0, 2.0;
  const Dataset d = standardize(make_dataset(values));
  CHECK(d.standardized);
  CHECK(d.col_means[0] == doctest::Approx(1.0));
  CHECK(d.col_stds[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(d.values(0, 0) == doctest::Approx(-0.7071067811865475));
  CHECK(d.values(1, 0) == doctest::Approx(0.7071067811865475));
}

TEST_CASE("standardize is idempotent and zeroes constant columns") {
  std::mt19937_64 rng(3);
  Matrix values = psp_test::random_matrix(40, 3, rng);
  values.col(1).setConstant(7.5);
  const Dataset once = standardize(make_dataset(values));
  const Dataset twice = standardize(once);
  CHECK((twice.values - once.values).cwiseAbs().maxCoeff() < 1e-9);

  CHECK(once.values.col(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(once.col_stds[1] == 1.0);
}

TEST_CASE("unstandardize inverts standardize") {
  std::mt19937_64 rng(4);
  const Matrix values = psp_test::random_matrix(30, 4, rng, -10.0, 10.0);
  const Dataset raw = make_dataset(values);
  const Dataset std_d = standardize(raw);
  const PointSet back = unstandardize(PointSet{std_d.values}, std_d);
  CHECK((back.points - values).cwiseAbs().maxCoeff() < 1e-9);

  Dataset carrier;
  carrier.values = Matrix::Zero(1, 1);
  carrier.col_means = Vector::Constant(1, 5.0);
  carrier.col_stds = Vector::Constant(1, 2.0);
  carrier.standardized = true;
  Matrix zero(1, 1);
  zero << 0.0;
  CHECK(unstandardize(PointSet{zero}, carrier).points(0, 0) == 5.0);

  carrier.col_means[0] = 0.0;
  carrier.col_stds[0] = 3.0;
  Matrix one(1, 1);
  one << 1.0;
  CHECK(unstandardize(PointSet{one}, carrier).points(0, 0) == 3.0);

  Matrix wrong(1, 2);
  wrong << 1.0, 2.0;
  CHECK_THROWS_AS(unstandardize(PointSet{wrong}, carrier), ValidationError);
}

TEST_CASE("sample hits the analytic moments") {
  const Dataset normal = sample({Family::Normal, 10}, 10000, 5);
  for (Eigen::Index c = 0; c < 10; ++c) {
    CHECK(std::abs(normal.values.col(c).mean()) < 4.0 / std::sqrt(10000.0));
  }

  const Dataset beta = sample({Family::Beta24, 1}, 100000, 6);
  CHECK(std::abs(beta.values.col(0).mean() - 1.0 / 3.0) < 0.01);
  CHECK(beta.values.minCoeff() > 0.0);
  CHECK(beta.values.maxCoeff() < 1.0);

  const Dataset expo = sample({Family::Exponential, 2}, 50000, 7);
  CHECK(std::abs(expo.values.col(0).mean() - 1.0) < 0.02);
  CHECK(expo.values.minCoeff() >= 0.0);
}

TEST_CASE("sample is reproducible for a fixed seed") {
  const Dataset a = sample({Family::Beta24, 3}, 100, 42);
  const Dataset b = sample({Family::Beta24, 3}, 100, 42);
  CHECK(a.values == b.values);
  const Dataset c = sample({Family::Beta24, 3}, 100, 43);
  CHECK(a.values != c.values);
}

TEST_CASE("round_to_data snaps to nearest rows, ties to lowest index") {
  Matrix data(2, 1);
  data << 0.0, 10.0;
  Dataset d = make_dataset(data);
  Matrix q(1, 1);
  q << 1.0;
  CHECK(round_to_data(PointSet{q}, d).points(0, 0) == 0.0);

  data << 0.0, 2.0;
  d = make_dataset(data);
  CHECK(round_to_data(PointSet{q}, d).points(0, 0) == 0.0);  // tie: lowest row wins
  CHECK(nearest_rows(PointSet{q}, d)[0] == 0);

  // a point already in the data maps to itself
  Matrix member(1, 1);
  member << 2.0;
  CHECK(round_to_data(PointSet{member}, d).points(0, 0) == 2.0);
}

TEST_CASE("round_to_data output is always a subset of the data rows") {
  std::mt19937_64 rng(8);
  const Dataset d = make_dataset(psp_test::random_matrix(50, 3, rng));
  const PointSet q{psp_test::random_matrix(20, 3, rng, -3.0, 3.0)};
  const PointSet snapped = round_to_data(q, d);
  for (Eigen::Index i = 0; i < snapped.points.rows(); ++i) {
    bool found = false;
    for (Eigen::Index m = 0; m < d.values.rows() && !found; ++m) {
      found = snapped.points.row(i) == d.values.row(m);
    }
    CHECK(found);
  }
}
