#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rmdp/linalg.hpp"
#include "rmdp/tolerance.hpp"

namespace rmdp {

// Per-control transition matrices; row x of kernel[u] is Q(.|x,u).
// Rows of infeasible pairs are carried along but never used.
using Kernel = std::vector<Matrix>;

// policy[x] is the control index applied in state x.
using Policy = std::vector<int>;

struct McmModel {
    std::vector<std::string> states;
    std::vector<std::string> controls;
    std::vector<std::vector<int>> feasible;  // per state, ascending control indices
    Kernel nominal;
    Matrix cost;  // |X| x |U|
    double radius = 0.0;

    int n_states() const { return static_cast<int>(states.size()); }
    int n_controls() const { return static_cast<int>(controls.size()); }
    bool is_feasible(int x, int u) const;
    int state_index(const std::string& name) const;    // -1 when absent
    int control_index(const std::string& name) const;  // -1 when absent
};

struct ValidationError {
    std::string location;
    std::string message;
};

std::vector<ValidationError> validate(const McmModel& model, double tol = tolerance());

// Throws std::invalid_argument naming the offending state.
void check_policy(const McmModel& model, const Policy& g);

Matrix restrict(const Kernel& kernel, const Policy& g);
Vector restrict_cost(const McmModel& model, const Policy& g);

Policy first_feasible_policy(const McmModel& model);

// Number of deterministic stationary policies, saturating at max double.
double policy_count(const McmModel& model);

// Visits every feasible policy in lexicographic order of declared controls.
// The visitor returns false to stop early.
void for_each_policy(const McmModel& model, const std::function<bool(const Policy&)>& visit);

std::string format_policy(const McmModel& model, const Policy& g);

}  // namespace rmdp
