#pragma once

// Shared scalar-templated dense types.  Eigen is the only math dependency;
// everything downstream works in terms of these aliases so the scalar type
// can be swapped in one place.

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>

namespace ineq {

// Error taxonomy, mirrored by the CLI exit codes: malformed input (2),
// infeasible censoring region (1), internal invariant breach (3).
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct internal_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VecX = Vec<double>;
using MatX = Mat<double>;
using VecI = Vec<int>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace ineq
