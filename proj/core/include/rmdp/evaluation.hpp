#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "rmdp/chain.hpp"
#include "rmdp/model.hpp"

namespace rmdp {

struct Evaluation {
    Vector gain;               // per state; constant when unichain
    Vector bias;               // V (unichain) or h (multichain)
    std::vector<int> anchors;  // states where the bias is pinned
    bool unichain = true;
    ClassDecomposition classes;
};

struct EvaluationFailure {
    std::string reason;
    ClassDecomposition classes;
    std::vector<double> class_gains;  // q.f for each recurrent class, in class order
};

using UnichainResult = std::variant<Evaluation, EvaluationFailure>;

// Bias values fixed at given states. In each recurrent class the lowest
// pinned state is used; a class without a pin gets h = 0 at its lowest state.
using BiasPins = std::map<int, double>;

// Solves J e + V = f + P V with V(anchor) = 0.
UnichainResult evaluate_unichain(const Matrix& P, const Vector& f, int anchor,
                                 double tol = tolerance());

// J = P* f and (I - P) h = f - J with one pin per recurrent class.
Evaluation evaluate_multichain(const Matrix& P, const Vector& f, const BiasPins& pins = {});

UnichainResult evaluate_unichain(const McmModel& model, const Kernel& kernel, const Policy& g,
                                 int anchor, double tol = tolerance());
Evaluation evaluate_multichain(const McmModel& model, const Kernel& kernel, const Policy& g,
                               const BiasPins& pins = {});

// Per-state long-run average cost of g under kernel.
Vector average_cost_of_policy(const McmModel& model, const Policy& g, const Kernel& kernel);

// max |J + h - f - P h| and max |J - P J|.
double bias_equation_residual(const Matrix& P, const Vector& f, const Evaluation& e);
double gain_equation_residual(const Matrix& P, const Evaluation& e);

std::string describe_failure(const EvaluationFailure& f, const std::vector<std::string>& names);

}  // namespace rmdp
