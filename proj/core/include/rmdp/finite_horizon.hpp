#pragma once

#include <vector>

#include "rmdp/model.hpp"

namespace rmdp {

struct FiniteHorizonResult {
    // value_functions[j] is V_j; value_functions[horizon] is the terminal vector.
    std::vector<Vector> value_functions;
    std::vector<Policy> greedy_policies;  // one per stage j < horizon
    // Per stage, max_x |oscillation-form value - exact min-max value|.
    std::vector<double> oscillation_gap;
    Vector terminal;
};

// Backward min-max recursion with the exact ball maximum at every stage.
FiniteHorizonResult finite_horizon_solve(const McmModel& model, int horizon,
                                         const Vector& terminal, double tol = tolerance());

}  // namespace rmdp
