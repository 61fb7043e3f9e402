#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace psp {

// Row-major so that matrix rows can be handed to the SIMD kernels as
// contiguous spans.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using ConstRowRef = Eigen::Ref<const Eigen::RowVectorXd>;
using ConstVecRef = Eigen::Ref<const Vector>;

/// Runtime failure (solver breakdown, I/O failure, ...). CLI exit code 1.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad input: malformed files, dimension mismatches, invalid parameters.
/// CLI exit code 2.
struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(what) {}
};

}  // namespace psp
