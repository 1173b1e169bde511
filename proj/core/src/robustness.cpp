#include "rmdp/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rmdp/chain.hpp"
#include "rmdp/worst_case.hpp"

namespace rmdp {

namespace {

constexpr double kBreakpointTol = 1e-12;

void normalize_points(std::vector<double>& v) {
    for (double& b : v) b = std::clamp(b, 0.0, 2.0);
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double b : v)
        if (out.empty() || b - out.back() > kBreakpointTol) out.push_back(b);
    v = std::move(out);
}

SupportPartition nominal_partition(const McmModel& m, const Policy& g) {
    return partition_support(evaluate_multichain(m, m.nominal, g).bias);
}

}  // namespace

std::vector<double> row_breakpoints(const Vector& nominal, const SupportPartition& part) {
    std::vector<double> out;
    if (part.constant()) return out;
    double removed = 0.0;
    for (int i : part.removal_order()) {
        removed += nominal(i);
        out.push_back(2.0 * removed);
    }
    double top = 0.0;
    for (int i : part.max_set) top += nominal(i);
    out.push_back(2.0 * (1.0 - top));
    normalize_points(out);
    return out;
}

std::vector<double> radius_breakpoints(const McmModel& m) {
    std::vector<double> all;
    for_each_policy(m, [&](const Policy& g) {
        const auto part = nominal_partition(m, g);
        for (int x = 0; x < m.n_states(); ++x)
            for (int u : m.feasible[x]) {
                const auto b = row_breakpoints(m.nominal[u].row(x).transpose(), part);
                all.insert(all.end(), b.begin(), b.end());
            }
        return true;
    });
    normalize_points(all);
    return all;
}

Matrix worst_case_restriction(const McmModel& m, const Policy& g, const SupportPartition& part,
                              double radius) {
    const int n = m.n_states();
    Matrix P(n, n);
    for (int x = 0; x < n; ++x)
        P.row(x) = waterfill_row(m.nominal[g[x]].row(x).transpose(), part, radius).distribution;
    return P;
}

RmaxReport compute_rmax(const McmModel& m, double enumeration_cap) {
    if (policy_count(m) > enumeration_cap)
        throw std::length_error("policy space of " + std::to_string(policy_count(m)) +
                                " policies exceeds the enumeration cap of " +
                                std::to_string(enumeration_cap));
    RmaxReport rep;
    rep.allocation_rule =
        "added mass on the first max-set state; removal from the lowest level upward, "
        "declared order within a level";

    std::vector<double> all;
    for_each_policy(m, [&](const Policy& g) {
        if (!is_irreducible(restrict(m.nominal, g))) {
            rep.r_max = 0.0;
            rep.has_witness = true;
            rep.witness_policy = g;
            rep.witness_partition = {};
            rep.nominal_reducible = true;
            return false;
        }
        const auto part = nominal_partition(m, g);
        std::vector<double> pts{0.0, 2.0};
        for (int x = 0; x < m.n_states(); ++x) {
            const auto b = row_breakpoints(m.nominal[g[x]].row(x).transpose(), part);
            pts.insert(pts.end(), b.begin(), b.end());
        }
        normalize_points(pts);
        all.insert(all.end(), pts.begin(), pts.end());

        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (pts[i] >= rep.r_max && rep.has_witness) break;
            bool reducible = !is_irreducible(worst_case_restriction(m, g, part, pts[i]));
            if (!reducible && i + 1 < pts.size()) {
                const double mid = 0.5 * (pts[i] + pts[i + 1]);
                reducible = !is_irreducible(worst_case_restriction(m, g, part, mid));
            }
            if (reducible) {
                if (!rep.has_witness || pts[i] < rep.r_max) {
                    rep.r_max = pts[i];
                    rep.has_witness = true;
                    rep.witness_policy = g;
                    rep.witness_partition = part;
                }
                break;
            }
        }
        return true;
    });

    if (rep.nominal_reducible) {
        rep.reducible_at_rmax = true;
        all = radius_breakpoints(m);
    } else if (rep.has_witness) {
        rep.reducible_at_rmax = !is_irreducible(
            worst_case_restriction(m, rep.witness_policy, rep.witness_partition, rep.r_max));
    }
    normalize_points(all);
    rep.breakpoints = std::move(all);
    return rep;
}

SweepResult sweep_radius(const McmModel& model, const std::vector<double>& radii,
                         Algorithm algorithm, const Policy& g0, const PolicyIterationOptions& opt) {
    SweepResult out;
    out.algorithm = algorithm;
    for (double r : radii) {
        SweepRow row;
        row.radius = r;
        try {
            if (!(r >= 0.0 && r <= 2.0))
                throw std::invalid_argument("radius " + std::to_string(r) + " is outside [0, 2]");
            McmModel m = model;
            m.radius = r;
            const Policy start = g0.empty() ? first_feasible_policy(m) : g0;
            const auto rep = algorithm == Algorithm::unichain
                                 ? policy_iteration_unichain(m, start, opt)
                                 : policy_iteration_general(m, start, opt);
            row.stop_reason = rep.stop_reason;
            row.policy = rep.final_policy;
            row.message = rep.message;
            if (rep.final_evaluation) {
                row.gain = rep.final_evaluation->gain;
                row.residual = rep.residuals.dp;
                row.irreducible = is_irreducible(restrict(rep.final_kernel, rep.final_policy));
            }
        } catch (const std::exception& e) {
            row.stop_reason = StopReason::evaluation_failure;
            row.message = e.what();
        }
        out.rows.push_back(std::move(row));
    }

    std::vector<const SweepRow*> ok;
    for (const auto& r : out.rows)
        if (r.stop_reason == StopReason::converged && r.gain.size() > 0) ok.push_back(&r);
    std::sort(ok.begin(), ok.end(),
              [](const SweepRow* a, const SweepRow* b) { return a->radius < b->radius; });
    for (std::size_t i = 1; i < ok.size(); ++i)
        if ((ok[i - 1]->gain - ok[i]->gain).maxCoeff() > 1e-9) out.gain_monotone = false;
    return out;
}

}  // namespace rmdp
