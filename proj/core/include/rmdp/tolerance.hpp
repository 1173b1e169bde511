#pragma once

namespace rmdp {

// Structural thresholds: pivots below this are singular, entries below this
// are not graph edges.
inline constexpr double kPivotTol = 1e-12;
inline constexpr double kEdgeTol = 1e-12;

inline constexpr double kDefaultTol = 1e-9;

// Tolerance for row sums, level grouping, improvement ties and solve
// residuals. ROBUST_MDP_TOL overrides it when set to a positive number, and
// set_tolerance overrides both for the rest of the process.
double tolerance();
void set_tolerance(double tol);

}  // namespace rmdp
