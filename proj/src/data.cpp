#include "psp/data.hpp"

#include "psp/csv.hpp"
#include "psp/rng.hpp"
#include "psp/simd.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace psp {

const char* family_name(Family f) {
  switch (f) {
    case Family::Normal: return "normal";
    case Family::Exponential: return "exp";
    case Family::Beta24: return "beta";
  }
  return "?";
}

Dataset make_dataset(Matrix values) {
  if (values.rows() < 1 || values.cols() < 1) {
    throw ValidationError("dataset must have at least one row and one column");
  }
  if (!values.allFinite()) throw ValidationError("dataset contains non-finite values");
  Dataset d;
  d.values = std::move(values);
  d.col_means = Vector::Zero(d.values.cols());
  d.col_stds = Vector::Ones(d.values.cols());
  return d;
}

Dataset load_csv(const std::string& path, bool has_header) {
  return make_dataset(read_csv(path, has_header).values);
}

Dataset standardize(const Dataset& d) {
  const Eigen::Index n = d.values.rows();
  const Eigen::Index p = d.values.cols();
  if (n < 2) throw ValidationError("standardize needs at least 2 rows");
  Dataset out;
  out.col_means = d.values.colwise().mean();
  out.col_stds = Vector(p);
  out.values.resize(n, p);
  for (Eigen::Index c = 0; c < p; ++c) {
    const double var =
        (d.values.col(c).array() - out.col_means[c]).square().sum() / double(n - 1);
    double sd = std::sqrt(var);
    if (!(sd > 0.0)) sd = 1.0;  // constant column
    out.col_stds[c] = sd;
    out.values.col(c) = (d.values.col(c).array() - out.col_means[c]) / sd;
  }
  out.standardized = true;
  return out;
}

Matrix unstandardize_rows(const Matrix& pts, const Dataset& d) {
  if (pts.cols() != d.values.cols()) {
    throw ValidationError("unstandardize: dimension mismatch");
  }
  Matrix out = pts;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    out.col(c) = pts.col(c).array() * d.col_stds[c] + d.col_means[c];
  }
  return out;
}

PointSet unstandardize(const PointSet& ps, const Dataset& d) {
  return PointSet{unstandardize_rows(ps.points, d)};
}

Dataset sample(const DistributionSpec& spec, Eigen::Index count, std::uint64_t seed) {
  if (spec.p < 1) throw ValidationError("sample: dimension must be >= 1");
  if (count < 1) throw ValidationError("sample: count must be >= 1");
  Matrix values(count, spec.p);
  Rng rng = make_rng(seed, streams::kSample);
  switch (spec.family) {
    case Family::Normal: {
      std::normal_distribution<double> dist(0.0, 1.0);
      for (Eigen::Index r = 0; r < count; ++r)
        for (Eigen::Index c = 0; c < spec.p; ++c) values(r, c) = dist(rng);
      break;
    }
    case Family::Exponential: {
      std::exponential_distribution<double> dist(1.0);
      for (Eigen::Index r = 0; r < count; ++r)
        for (Eigen::Index c = 0; c < spec.p; ++c) values(r, c) = dist(rng);
      break;
    }
    case Family::Beta24: {
      // Beta(a,b) = Ga/(Ga+Gb) with Ga ~ Gamma(a,1), Gb ~ Gamma(b,1).
      std::gamma_distribution<double> ga(2.0, 1.0);
      std::gamma_distribution<double> gb(4.0, 1.0);
      for (Eigen::Index r = 0; r < count; ++r) {
        for (Eigen::Index c = 0; c < spec.p; ++c) {
          const double x = ga(rng);
          const double y = gb(rng);
          values(r, c) = x / (x + y);
        }
      }
      break;
    }
  }
  Dataset d;
  d.values = std::move(values);
  d.col_means = Vector::Zero(spec.p);
  d.col_stds = Vector::Ones(spec.p);
  return d;
}

std::vector<Eigen::Index> nearest_rows(const PointSet& ps, const Dataset& d) {
  if (ps.points.cols() != d.values.cols()) {
    throw ValidationError("round_to_data: dimension mismatch");
  }
  const int p = static_cast<int>(d.values.cols());
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(ps.points.rows()));
  for (Eigen::Index i = 0; i < ps.points.rows(); ++i) {
    const double* x = ps.points.row(i).data();
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index best_row = 0;
    for (Eigen::Index m = 0; m < d.values.rows(); ++m) {
      const double dist = simd::sum_sq_diff(x, d.values.row(m).data(), p);
      if (dist < best) {
        best = dist;
        best_row = m;
      }
    }
    idx[static_cast<std::size_t>(i)] = best_row;
  }
  return idx;
}

PointSet round_to_data(const PointSet& ps, const Dataset& d) {
  const auto idx = nearest_rows(ps, d);
  Matrix out(ps.points.rows(), ps.points.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) = d.values.row(idx[std::size_t(i)]);
  return PointSet{std::move(out)};
}

}  // namespace psp
