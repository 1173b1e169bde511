#pragma once

#include "rmdp/model.hpp"
#include "rmdp/tv_ball.hpp"

namespace rmdp {

// Water-fills every feasible row against one shared partition.
Kernel worst_case_kernel(const McmModel& model, const SupportPartition& part);
Kernel worst_case_kernel(const McmModel& model, const Vector& values, double tol = tolerance());

// Ranks states by gain level first and bias level second; water-filling on
// this key maximizes Q.gain and, among the maximizers, Q.bias.
Vector lexicographic_key(const Vector& gain, const Vector& bias, double tol = tolerance());

// Entry (x, u) is cost(x, u) + max over the ball of Q.values (exact), or
// +inf when u is infeasible at x.
Matrix robust_q_values(const McmModel& model, const Vector& values, double tol = tolerance());

// Same with the oscillation closed form mu.values + (R/2) osc(values).
Matrix oscillation_q_values(const McmModel& model, const Vector& values);

// Entry (x, u) is cost(x, u) * with_cost + kernel[u].row(x) . values.
Matrix kernel_q_values(const McmModel& model, const Kernel& kernel, const Vector& values,
                       bool with_cost = true);

Vector row_minima(const Matrix& q);

// Minimizer of q.row(x) over the candidates. The incumbent wins when it is
// within tol of the minimum; otherwise the first candidate in declared order
// within tol of the minimum. incumbent < 0 means none.
int argmin_control(const Matrix& q, int x, const std::vector<int>& candidates, int incumbent,
                   double tol);

}  // namespace rmdp
