#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmdp/evaluation.hpp"
#include "rmdp/model.hpp"
#include "rmdp/tv_ball.hpp"

namespace rmdp {

enum class Algorithm { unichain, general };
enum class StopReason { converged, iteration_cap, evaluation_failure };

// Where the worst-case kernel's partition came from: the nominal bias of the
// current policy, or the robust (gain, bias) ranking found by nature's own
// policy iteration once the nominal ordering failed to certify.
enum class PartitionSource { nominal, robust };

enum class ImprovementStep { gain, bias };

const char* to_string(Algorithm a);
const char* to_string(StopReason s);
const char* to_string(PartitionSource s);
const char* to_string(ImprovementStep s);

struct PolicyIterationOptions {
    int max_iter = 0;  // 0 selects default_max_iter(model)
    int anchor = -1;   // unichain bias anchor; -1 selects the last state
    BiasPins pins;     // multichain bias pins
    bool refine = true;
    double tol = tolerance();
    double certify_tol = 1e-6;
};

struct IterationRecord {
    Policy policy;
    std::optional<Evaluation> nominal;
    PartitionSource partition_source = PartitionSource::nominal;
    SupportPartition partition;
    Kernel worst_case;
    Evaluation robust;
    Matrix gain_q;  // Q*(x,u).J, general algorithm only
    Matrix q;       // f(x,u) + Q*(x,u).V
    ImprovementStep step = ImprovementStep::bias;
    Policy improved;
};

struct Residuals {
    double dp = 0.0;           // exact min-max equation(s)
    double oscillation = 0.0;  // same equation with the oscillation closed form
    double gain_equation = 0.0;
    double bias_equation = 0.0;
    bool policy_attains = true;  // the policy attains every minimum within tol
};

struct IterationReport {
    Algorithm algorithm = Algorithm::unichain;
    std::vector<IterationRecord> iterations;
    Policy final_policy;
    std::optional<Evaluation> final_evaluation;
    Kernel final_kernel;
    StopReason stop_reason = StopReason::converged;
    std::optional<EvaluationFailure> failure;
    Residuals residuals;
    int refinement_rounds = 0;
    bool gain_monotone = true;
    std::string message;
};

int default_max_iter(const McmModel& model);

IterationReport policy_iteration_unichain(const McmModel& model, const Policy& g0,
                                          const PolicyIterationOptions& opt = {});
IterationReport policy_iteration_general(const McmModel& model, const Policy& g0,
                                         const PolicyIterationOptions& opt = {});

Residuals unichain_residuals(const McmModel& model, const Policy& g, const Evaluation& e,
                             double tol = tolerance());
Residuals general_residuals(const McmModel& model, const Policy& g, const Evaluation& e,
                            double tol = tolerance());

struct RobustPolicyValue {
    Kernel kernel;
    Evaluation evaluation;
    SupportPartition partition;
    int rounds = 0;
};

// Worst-case (gain, bias) of a fixed policy: nature improves its rows by
// policy iteration until no row raises Q.J, or Q.h at equal Q.J.
// seed_key orders the states for the starting rows; empty uses the nominal bias.
RobustPolicyValue robust_policy_evaluation(const McmModel& model, const Policy& g,
                                           const Vector& seed_key = {},
                                           const BiasPins& pins = {}, double tol = tolerance());

}  // namespace rmdp
