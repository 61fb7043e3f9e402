#pragma once

#include "psp/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace psp {

/// The big data F_N: an N x p matrix plus its standardization state. Values
/// are never mutated after construction; standardize/unstandardize return
/// fresh objects.
struct Dataset {
  Matrix values;
  Vector col_means;
  Vector col_stds;
  bool standardized = false;

  Eigen::Index n_rows() const { return values.rows(); }
  Eigen::Index n_cols() const { return values.cols(); }
};

/// A reduced point set F_n (n x p).
struct PointSet {
  Matrix points;

  Eigen::Index n_rows() const { return points.rows(); }
  Eigen::Index n_cols() const { return points.cols(); }
};

enum class Family { Normal, Exponential, Beta24 };

struct DistributionSpec {
  Family family = Family::Normal;
  int p = 1;
};

const char* family_name(Family f);

Dataset make_dataset(Matrix values);

/// Reads a numeric CSV into a Dataset (standardized = false).
Dataset load_csv(const std::string& path, bool has_header);

/// Maps each column to (x - mean) / std with the sample std (divisor N-1).
/// Constant columns map to zero and record std = 1 so the inverse transform
/// is exact. Requires N >= 2.
Dataset standardize(const Dataset& d);

/// Inverse of standardize using the means/stds recorded on d.
PointSet unstandardize(const PointSet& ps, const Dataset& d);
Matrix unstandardize_rows(const Matrix& pts, const Dataset& d);

/// count i.i.d. draws from the named family, one independent coordinate per
/// column. Bit-reproducible for a fixed seed on a given build.
Dataset sample(const DistributionSpec& spec, Eigen::Index count, std::uint64_t seed);

/// Index of the Euclidean-nearest row of d for each row of ps; ties go to the
/// lowest row index.
std::vector<Eigen::Index> nearest_rows(const PointSet& ps, const Dataset& d);

/// Snaps every point to the nearest dataset row (distances in whatever
/// coordinate system d carries; callers wanting the standardized metric pass
/// standardized inputs).
PointSet round_to_data(const PointSet& ps, const Dataset& d);

}  // namespace psp
