#include "rmdp/policy_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include "rmdp/worst_case.hpp"

namespace rmdp {

const char* to_string(Algorithm a) { return a == Algorithm::unichain ? "unichain" : "general"; }

const char* to_string(StopReason s) {
    switch (s) {
        case StopReason::converged: return "converged";
        case StopReason::iteration_cap: return "iteration-cap";
        case StopReason::evaluation_failure: return "evaluation-failure";
    }
    return "?";
}

const char* to_string(PartitionSource s) {
    return s == PartitionSource::nominal ? "nominal" : "robust";
}

const char* to_string(ImprovementStep s) { return s == ImprovementStep::gain ? "gain" : "bias"; }

int default_max_iter(const McmModel& m) {
    return static_cast<int>(std::min(policy_count(m), 1e4));
}

namespace {

constexpr double kAttainTol = 1e-6;
constexpr int kNatureRounds = 1000;

using Evaluator = std::function<UnichainResult(const Matrix&, const Vector&)>;
using NatureOutcome = std::variant<RobustPolicyValue, EvaluationFailure>;

Vector waterfilled(const McmModel& m, int x, int u, const SupportPartition& part) {
    return waterfill_row(m.nominal[u].row(x).transpose(), part, m.radius).distribution;
}

NatureOutcome nature_iteration(const McmModel& m, const Policy& g, const Vector& seed_key,
                               const Evaluator& evaluate, double tol) {
    const int n = m.n_states();
    const Vector f = restrict_cost(m, g);
    const auto seed = partition_support(seed_key, tol);
    Matrix rows(n, n);
    for (int x = 0; x < n; ++x) rows.row(x) = waterfilled(m, x, g[x], seed);

    for (int round = 0; round < kNatureRounds; ++round) {
        auto r = evaluate(rows, f);
        if (auto* fail = std::get_if<EvaluationFailure>(&r)) return *fail;
        const Evaluation& e = std::get<Evaluation>(r);

        bool changed = false;
        const auto by_gain = partition_support(e.gain, tol);
        for (int x = 0; x < n; ++x) {
            const Vector c = waterfilled(m, x, g[x], by_gain);
            if (c.dot(e.gain) > rows.row(x).dot(e.gain) + tol) {
                rows.row(x) = c;
                changed = true;
            }
        }
        if (changed) continue;

        const auto by_key = partition_support(lexicographic_key(e.gain, e.bias, tol), tol);
        for (int x = 0; x < n; ++x) {
            const Vector c = waterfilled(m, x, g[x], by_key);
            if (std::abs(c.dot(e.gain) - rows.row(x).dot(e.gain)) <= tol &&
                c.dot(e.bias) > rows.row(x).dot(e.bias) + tol) {
                rows.row(x) = c;
                changed = true;
            }
        }
        if (changed) continue;

        RobustPolicyValue out;
        out.kernel = worst_case_kernel(m, by_key);
        for (int x = 0; x < n; ++x) out.kernel[g[x]].row(x) = rows.row(x);
        out.evaluation = e;
        out.partition = by_key;
        out.rounds = round + 1;
        return out;
    }
    throw std::runtime_error("worst-case response did not settle for policy " +
                             format_policy(m, g));
}

bool gain_increased(const Evaluation& prev, const Evaluation& next, double tol) {
    return (next.gain - prev.gain).maxCoeff() > tol;
}

void finish(IterationReport& rep, const McmModel& m, const IterationRecord& rec,
            const Residuals& res) {
    rep.final_policy = rec.policy;
    rep.final_evaluation = rec.robust;
    rep.final_kernel = rec.worst_case;
    rep.residuals = res;
    const Matrix P = restrict(rec.worst_case, rec.policy);
    rep.residuals.gain_equation = gain_equation_residual(P, rec.robust);
    rep.residuals.bias_equation = bias_equation_residual(P, restrict_cost(m, rec.policy), rec.robust);
}

void fail_evaluation(IterationReport& rep, const McmModel& m, const Policy& g,
                     EvaluationFailure failure, const char* which) {
    rep.stop_reason = StopReason::evaluation_failure;
    rep.final_policy = g;
    rep.message = std::string("evaluation of ") + format_policy(m, g) + " under the " + which +
                  " kernel failed: " + describe_failure(failure, m.states) +
                  "; the general algorithm handles multichain policies";
    rep.failure = std::move(failure);
}

struct Loop {
    const McmModel& m;
    const PolicyIterationOptions& opt;
    Algorithm algorithm;
    Evaluator evaluate;
    std::function<Residuals(const Policy&, const Evaluation&)> residuals;
};

IterationReport run(const Loop& L, const Policy& g0) {
    const McmModel& m = L.m;
    const double tol = L.opt.tol;
    check_policy(m, g0);
    const int cap = L.opt.max_iter > 0 ? L.opt.max_iter : default_max_iter(m);

    IterationReport rep;
    rep.algorithm = L.algorithm;
    Policy g = g0;
    bool refining = false;
    Vector seed;
    std::set<Policy> seen{g0};
    std::optional<Evaluation> previous;

    // The nominal phase and the refinement phase each get `cap` records.
    for (int it = 0;; ++it) {
        if (it >= cap) {
            rep.stop_reason = StopReason::iteration_cap;
            rep.message = "iteration cap of " + std::to_string(cap) + " reached";
            if (!rep.iterations.empty()) {
                const auto& last = rep.iterations.back();
                finish(rep, m, last, L.residuals(last.policy, last.robust));
            }
            rep.final_policy = g;
            return rep;
        }

        IterationRecord rec;
        rec.policy = g;
        const Vector f = restrict_cost(m, g);
        if (!refining) {
            auto nom = L.evaluate(restrict(m.nominal, g), f);
            if (auto* fail = std::get_if<EvaluationFailure>(&nom)) {
                fail_evaluation(rep, m, g, std::move(*fail), "nominal");
                return rep;
            }
            rec.nominal = std::get<Evaluation>(nom);
            rec.partition = partition_support(rec.nominal->bias, tol);
            rec.worst_case = worst_case_kernel(m, rec.partition);
            auto rob = L.evaluate(restrict(rec.worst_case, g), f);
            if (auto* fail = std::get_if<EvaluationFailure>(&rob)) {
                fail_evaluation(rep, m, g, std::move(*fail), "worst-case");
                return rep;
            }
            rec.robust = std::get<Evaluation>(rob);
        } else {
            auto nat = nature_iteration(m, g, seed, L.evaluate, tol);
            if (auto* fail = std::get_if<EvaluationFailure>(&nat)) {
                fail_evaluation(rep, m, g, std::move(*fail), "worst-case");
                return rep;
            }
            auto& v = std::get<RobustPolicyValue>(nat);
            rec.partition_source = PartitionSource::robust;
            rec.partition = std::move(v.partition);
            rec.worst_case = std::move(v.kernel);
            rec.robust = std::move(v.evaluation);
        }

        rec.q = kernel_q_values(m, rec.worst_case, rec.robust.bias);
        rec.improved = g;
        if (L.algorithm == Algorithm::unichain) {
            for (int x = 0; x < m.n_states(); ++x)
                rec.improved[x] = argmin_control(rec.q, x, m.feasible[x], g[x], tol);
        } else {
            rec.gain_q = kernel_q_values(m, rec.worst_case, rec.robust.gain, false);
            for (int x = 0; x < m.n_states(); ++x)
                rec.improved[x] = argmin_control(rec.gain_q, x, m.feasible[x], g[x], tol);
            rec.step = rec.improved == g ? ImprovementStep::bias : ImprovementStep::gain;
            if (rec.step == ImprovementStep::bias) {
                const Vector best = row_minima(rec.gain_q);
                for (int x = 0; x < m.n_states(); ++x) {
                    std::vector<int> attaining;
                    for (int u : m.feasible[x])
                        if (rec.gain_q(x, u) <= best(x) + tol) attaining.push_back(u);
                    rec.improved[x] = argmin_control(rec.q, x, attaining, g[x], tol);
                }
            }
        }

        if (previous && gain_increased(*previous, rec.robust, tol)) rep.gain_monotone = false;
        previous = rec.robust;
        rep.iterations.push_back(rec);
        const IterationRecord& cur = rep.iterations.back();

        if (cur.improved == g) {
            const Residuals res = L.residuals(g, cur.robust);
            if (res.dp <= L.opt.certify_tol || !L.opt.refine || refining) {
                rep.stop_reason = StopReason::converged;
                finish(rep, m, cur, res);
                if (res.dp > L.opt.certify_tol)
                    rep.message = "converged without certification";
                return rep;
            }
            refining = true;
            ++rep.refinement_rounds;
            it = -1;
            seed = lexicographic_key(cur.robust.gain, cur.robust.bias, tol);
            continue;
        }
        if (!refining && L.opt.refine && seen.count(cur.improved)) {
            refining = true;
            ++rep.refinement_rounds;
            it = -1;
        }
        seen.insert(cur.improved);
        seed = lexicographic_key(cur.robust.gain, cur.robust.bias, tol);
        g = cur.improved;
    }
}

}  // namespace

IterationReport policy_iteration_unichain(const McmModel& m, const Policy& g0,
                                          const PolicyIterationOptions& opt) {
    const int anchor = opt.anchor < 0 ? m.n_states() - 1 : opt.anchor;
    if (anchor >= m.n_states()) throw std::invalid_argument("anchor state out of range");
    Loop L{m, opt, Algorithm::unichain,
           [&](const Matrix& P, const Vector& f) {
               return evaluate_unichain(P, f, anchor, opt.tol);
           },
           [&](const Policy& g, const Evaluation& e) {
               return unichain_residuals(m, g, e, opt.tol);
           }};
    return run(L, g0);
}

IterationReport policy_iteration_general(const McmModel& m, const Policy& g0,
                                         const PolicyIterationOptions& opt) {
    Loop L{m, opt, Algorithm::general,
           [&](const Matrix& P, const Vector& f) -> UnichainResult {
               return evaluate_multichain(P, f, opt.pins);
           },
           [&](const Policy& g, const Evaluation& e) {
               return general_residuals(m, g, e, opt.tol);
           }};
    return run(L, g0);
}

Residuals unichain_residuals(const McmModel& m, const Policy& g, const Evaluation& e,
                             double tol) {
    Residuals r;
    const Matrix q = robust_q_values(m, e.bias, tol);
    const Vector best = row_minima(q);
    r.dp = max_abs(e.gain + e.bias - best);
    r.oscillation = max_abs(e.gain + e.bias - row_minima(oscillation_q_values(m, e.bias)));
    for (int x = 0; x < m.n_states(); ++x)
        if (q(x, g[x]) > best(x) + kAttainTol) r.policy_attains = false;
    return r;
}

namespace {

// max(|J - min_u a|, |J + h - min over attaining u of b|) and attainment by g.
std::pair<double, bool> pair_residual(const McmModel& m, const Policy& g, const Evaluation& e,
                                      const Matrix& a, const Matrix& b, double tol) {
    double worst = 0.0;
    bool attains = true;
    const Vector amin = row_minima(a);
    for (int x = 0; x < m.n_states(); ++x) {
        double bmin = std::numeric_limits<double>::infinity();
        for (int u : m.feasible[x])
            if (a(x, u) <= amin(x) + tol) bmin = std::min(bmin, b(x, u));
        worst = std::max({worst, std::abs(e.gain(x) - amin(x)),
                          std::abs(e.gain(x) + e.bias(x) - bmin)});
        if (a(x, g[x]) > amin(x) + kAttainTol || b(x, g[x]) > bmin + kAttainTol) attains = false;
    }
    return {worst, attains};
}

}  // namespace

Residuals general_residuals(const McmModel& m, const Policy& g, const Evaluation& e,
                            double tol) {
    Residuals r;
    const Kernel K = worst_case_kernel(m, lexicographic_key(e.gain, e.bias, tol), tol);
    const auto exact = pair_residual(m, g, e, kernel_q_values(m, K, e.gain, false),
                                     kernel_q_values(m, K, e.bias, true), tol);
    r.dp = exact.first;
    r.policy_attains = exact.second;

    Matrix osc_gain = oscillation_q_values(m, e.gain);
    for (int x = 0; x < m.n_states(); ++x)
        for (int u : m.feasible[x]) osc_gain(x, u) -= m.cost(x, u);
    r.oscillation =
        pair_residual(m, g, e, osc_gain, oscillation_q_values(m, e.bias), tol).first;
    return r;
}

RobustPolicyValue robust_policy_evaluation(const McmModel& m, const Policy& g,
                                           const Vector& seed_key, const BiasPins& pins,
                                           double tol) {
    check_policy(m, g);
    Vector seed = seed_key;
    if (seed.size() == 0) seed = evaluate_multichain(m, m.nominal, g, pins).bias;
    auto out = nature_iteration(
        m, g, seed,
        [&](const Matrix& P, const Vector& f) -> UnichainResult {
            return evaluate_multichain(P, f, pins);
        },
        tol);
    return std::get<RobustPolicyValue>(out);
}

}  // namespace rmdp
