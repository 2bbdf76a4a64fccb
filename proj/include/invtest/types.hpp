#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace invtest {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Layout of a discretized multivariate functional observation: each row holds
/// `components` curves of `grid` points, stored component-major.
struct FunctionalLayout {
  int components = 1;
  int grid = 2;

  int width() const { return components * grid; }
  bool operator==(const FunctionalLayout&) const = default;
};

/// An n x d data matrix (rows are observations).
struct Sample {
  Matrix data;
  std::optional<FunctionalLayout> functional;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index cols() const { return data.cols(); }
  bool is_functional() const { return functional.has_value(); }
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shapes that do not line up (matrix vs. sample width, d < 2, ...).
struct DimensionError : Error {
  using Error::Error;
};

/// A precondition on arguments or configuration was violated.
struct InvalidArgument : Error {
  using Error::Error;
};

/// Input data could not be read or is unusable.
struct DataError : Error {
  using Error::Error;
};

}  // namespace invtest
