#pragma once

#include <optional>

#include <Eigen/Dense>

#include "rmdp/tolerance.hpp"

namespace rmdp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Gaussian elimination with partial pivoting. Returns nullopt when a pivot
// falls below pivot_tol in absolute value.
std::optional<Vector> solve_dense(Matrix A, Vector b, double pivot_tol = kPivotTol);

double max_abs(const Vector& v);

}  // namespace rmdp
