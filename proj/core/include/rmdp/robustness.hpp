#pragma once

#include <string>
#include <vector>

#include "rmdp/policy_iteration.hpp"

namespace rmdp {

// Radii where a water-filled entry of the row reaches zero, and where the
// added mass saturates, for a fixed partition. Sorted, deduplicated, in [0, 2].
std::vector<double> row_breakpoints(const Vector& nominal, const SupportPartition& part);

// Union of row breakpoints over all feasible rows, each policy contributing
// the partition of its nominal bias.
std::vector<double> radius_breakpoints(const McmModel& model);

// restrict(worst-case kernel at radius, g) with the given partition.
Matrix worst_case_restriction(const McmModel& model, const Policy& g,
                              const SupportPartition& part, double radius);

struct RmaxReport {
    double r_max = 2.0;
    bool has_witness = false;
    Policy witness_policy;
    SupportPartition witness_partition;
    bool nominal_reducible = false;  // the witness is reducible already at R = 0
    bool reducible_at_rmax = false;
    std::vector<double> breakpoints;
    std::string allocation_rule;
};

inline constexpr double kDefaultEnumerationCap = 1e5;

// Throws std::length_error when the policy space exceeds enumeration_cap.
RmaxReport compute_rmax(const McmModel& model, double enumeration_cap = kDefaultEnumerationCap);

struct SweepRow {
    double radius = 0.0;
    StopReason stop_reason = StopReason::converged;
    Policy policy;
    Vector gain;
    bool irreducible = false;
    double residual = 0.0;
    std::string message;
};

struct SweepResult {
    Algorithm algorithm = Algorithm::unichain;
    std::vector<SweepRow> rows;
    bool gain_monotone = true;  // over rows that converged, in increasing radius
};

// Solver failures are recorded in the row rather than thrown.
SweepResult sweep_radius(const McmModel& model, const std::vector<double>& radii,
                         Algorithm algorithm, const Policy& g0 = {},
                         const PolicyIterationOptions& opt = {});

}  // namespace rmdp
