#include "report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace rmdp::report {

json to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::isfinite(v(i)))
            a.push_back(v(i));
        else
            a.push_back(nullptr);
    }
    return a;
}

json to_json(const Matrix& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
    return a;
}

json to_json(const McmModel& m, const Policy& g) {
    json o = json::object();
    for (std::size_t x = 0; x < g.size(); ++x) o[m.states[x]] = m.controls[g[x]];
    return o;
}

json to_json(const McmModel& m, const Kernel& k) {
    json o = json::object();
    for (int u = 0; u < m.n_controls(); ++u) o[m.controls[u]] = to_json(k[u]);
    return o;
}

namespace {

json names(const McmModel& m, const std::vector<int>& s) {
    json a = json::array();
    for (int i : s) a.push_back(m.states[i]);
    return a;
}

}  // namespace

json to_json(const McmModel& m, const SupportPartition& p) {
    json mids = json::array();
    for (const auto& s : p.middle_sets) mids.push_back(names(m, s));
    return {{"max_set", names(m, p.max_set)},
            {"min_set", names(m, p.min_set)},
            {"middle_sets", mids},
            {"middle_levels", p.middle_levels},
            {"l_max", p.l_max},
            {"l_min", p.l_min}};
}

json to_json(const McmModel& m, const ClassDecomposition& d) {
    json a = json::array();
    for (const auto& c : d.classes)
        a.push_back({{"states", names(m, c.states)}, {"recurrent", c.recurrent}});
    return a;
}

json to_json(const McmModel& m, const Evaluation& e) {
    json anchors = json::array();
    for (int a : e.anchors) anchors.push_back(m.states[a]);
    return {{"gain", to_json(e.gain)},
            {"bias", to_json(e.bias)},
            {"anchors", anchors},
            {"unichain", e.unichain}};
}

json to_json(const McmModel& m, const EvaluationFailure& f) {
    return {{"reason", describe_failure(f, m.states)},
            {"classes", to_json(m, f.classes)},
            {"recurrent_class_gains", f.class_gains}};
}

json to_json(const Residuals& r) {
    return {{"dp", r.dp},
            {"oscillation", r.oscillation},
            {"gain_equation", r.gain_equation},
            {"bias_equation", r.bias_equation},
            {"policy_attains", r.policy_attains}};
}

json to_json(const McmModel& m, const IterationRecord& rec) {
    json o = {{"policy", to_json(m, rec.policy)},
              {"partition_source", to_string(rec.partition_source)},
              {"partition", to_json(m, rec.partition)},
              {"worst_case_kernel", to_json(m, rec.worst_case)},
              {"robust", to_json(m, rec.robust)},
              {"q_values", to_json(rec.q)},
              {"improved", to_json(m, rec.improved)}};
    o["nominal"] = rec.nominal ? to_json(m, *rec.nominal) : json(nullptr);
    if (rec.gain_q.size() > 0) {
        o["gain_q_values"] = to_json(rec.gain_q);
        o["step"] = to_string(rec.step);
    }
    return o;
}

json final_json(const McmModel& m, const IterationReport& rep) {
    json o = {{"policy", to_json(m, rep.final_policy)},
              {"stop_reason", to_string(rep.stop_reason)},
              {"iterations", rep.iterations.size()},
              {"refinement_rounds", rep.refinement_rounds},
              {"gain_monotone", rep.gain_monotone},
              {"message", rep.message}};
    if (rep.final_evaluation) {
        o["gain"] = to_json(rep.final_evaluation->gain);
        o["bias"] = to_json(rep.final_evaluation->bias);
        o["residuals"] = to_json(rep.residuals);
        o["worst_case_kernel"] = to_json(m, rep.final_kernel);
    } else {
        o["gain"] = nullptr;
        o["bias"] = nullptr;
        o["residuals"] = nullptr;
    }
    if (rep.failure) o["failure"] = to_json(m, *rep.failure);
    return o;
}

json diagnostics_json(const McmModel& m, const IterationReport& rep) {
    json o = json::object();
    if (rep.failure)
        o["classes"] = to_json(m, rep.failure->classes);
    else if (rep.final_evaluation)
        o["classes"] = to_json(m, rep.final_evaluation->classes);
    return o;
}

json to_json(const McmModel& m, const FiniteHorizonResult& r) {
    json stages = json::array();
    for (std::size_t j = 0; j < r.greedy_policies.size(); ++j)
        stages.push_back({{"stage", j},
                          {"value", to_json(r.value_functions[j])},
                          {"greedy_policy", to_json(m, r.greedy_policies[j])},
                          {"oscillation_gap", r.oscillation_gap[j]}});
    return {{"stages", stages}, {"terminal", to_json(r.terminal)}};
}

json to_json(const McmModel& m, const RmaxReport& r) {
    json o = {{"r_max", r.r_max},
              {"nominal_reducible", r.nominal_reducible},
              {"reducible_at_r_max", r.reducible_at_rmax},
              {"breakpoints", r.breakpoints},
              {"allocation_rule", r.allocation_rule}};
    if (r.has_witness) {
        o["witness_policy"] = to_json(m, r.witness_policy);
        o["witness_partition"] =
            r.nominal_reducible ? json(nullptr) : to_json(m, r.witness_partition);
    } else {
        o["witness_policy"] = nullptr;
        o["witness_partition"] = nullptr;
    }
    return o;
}

json to_json(const McmModel& m, const SweepResult& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json o = {{"radius", row.radius},
                  {"stop_reason", to_string(row.stop_reason)},
                  {"irreducible", row.irreducible},
                  {"message", row.message}};
        o["policy"] = row.policy.empty() ? json(nullptr) : to_json(m, row.policy);
        o["gain"] = row.gain.size() ? to_json(row.gain) : json(nullptr);
        o["residual"] = row.residual;
        rows.push_back(o);
    }
    return {{"algorithm", to_string(r.algorithm)}, {"rows", rows}, {"gain_monotone", r.gain_monotone}};
}

std::string num(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    if (std::abs(v) < 5e-16) v = 0.0;
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

std::string vec(const Vector& v) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v(i));
    return s + ")";
}

std::string set_names(const McmModel& m, const std::vector<int>& s) {
    return describe_class(s, m.states);
}

void print_kernel(std::ostream& os, const McmModel& m, const Kernel& k, const std::string& indent) {
    for (int u = 0; u < m.n_controls(); ++u) {
        os << indent << m.controls[u] << ":";
        for (int x = 0; x < m.n_states(); ++x) {
            os << (x ? "\n" + indent + std::string(m.controls[u].size() + 1, ' ') : "") << " [";
            for (int z = 0; z < m.n_states(); ++z) os << (z ? " " : "") << num(k[u](x, z));
            os << "]";
        }
        os << "\n";
    }
}

void print_partition(std::ostream& os, const McmModel& m, const SupportPartition& p) {
    os << "max " << set_names(m, p.max_set) << "  min " << set_names(m, p.min_set);
    for (const auto& s : p.middle_sets) os << "  middle " << set_names(m, s);
    os << "\n";
}

namespace {

std::string gain_text(const Vector& gain) {
    if ((gain.array() - gain(0)).abs().maxCoeff() <= 1e-12) return num(gain(0));
    return vec(gain);
}

std::string gain_text(const Evaluation& e) { return gain_text(e.gain); }

void print_evaluation(std::ostream& os, const Evaluation& e) {
    os << "J = " << gain_text(e) << "  bias = " << vec(e.bias) << "\n";
}

void print_q(std::ostream& os, const McmModel& m, const Matrix& q, const std::string& label) {
    os << "  " << label << ":\n";
    for (int x = 0; x < m.n_states(); ++x) {
        os << "    " << m.states[x] << ":";
        for (int u : m.feasible[x]) os << "  " << m.controls[u] << " " << num(q(x, u));
        os << "\n";
    }
}

}  // namespace

void print_report(std::ostream& os, const McmModel& m, const IterationReport& rep) {
    for (std::size_t i = 0; i < rep.iterations.size(); ++i) {
        const auto& r = rep.iterations[i];
        os << "iteration " << i << ": policy " << format_policy(m, r.policy) << "\n";
        if (r.nominal) {
            os << "  nominal:  ";
            print_evaluation(os, *r.nominal);
        }
        os << "  partition (" << to_string(r.partition_source) << "): ";
        print_partition(os, m, r.partition);
        os << "  worst-case kernel:\n";
        print_kernel(os, m, r.worst_case, "    ");
        os << "  robust:   ";
        print_evaluation(os, r.robust);
        if (r.gain_q.size() > 0) print_q(os, m, r.gain_q, "gain step Q*.J");
        print_q(os, m, r.q, "f + Q*.bias");
        if (rep.algorithm == Algorithm::general) os << "  step: " << to_string(r.step) << "\n";
        os << "  improved: " << format_policy(m, r.improved) << "\n";
    }
    os << "stop: " << to_string(rep.stop_reason) << " after " << rep.iterations.size()
       << " iteration(s)";
    if (rep.refinement_rounds) os << ", " << rep.refinement_rounds << " refinement round(s)";
    os << "\n";
    if (!rep.message.empty()) os << "note: " << rep.message << "\n";
    if (rep.failure) {
        os << "classes:";
        for (const auto& c : rep.failure->classes.classes)
            os << " " << set_names(m, c.states) << (c.recurrent ? " recurrent" : " transient");
        os << "\n";
    }
    if (rep.final_evaluation) {
        os << "residuals: dp " << num(rep.residuals.dp) << "  oscillation form "
           << num(rep.residuals.oscillation) << "  evaluation "
           << num(std::max(rep.residuals.gain_equation, rep.residuals.bias_equation)) << "\n";
        os << "bias = " << vec(rep.final_evaluation->bias) << "\n";
        os << "g* = " << format_policy(m, rep.final_policy)
           << ", J* = " << gain_text(*rep.final_evaluation) << "\n";
    }
}

void print_finite(std::ostream& os, const McmModel& m, const FiniteHorizonResult& r) {
    const int n = static_cast<int>(r.greedy_policies.size());
    os << "V_" << n << " = " << vec(r.terminal) << " (terminal)\n";
    for (int j = n - 1; j >= 0; --j)
        os << "V_" << j << " = " << vec(r.value_functions[j]) << "  greedy "
           << format_policy(m, r.greedy_policies[j]) << "  oscillation gap "
           << num(r.oscillation_gap[j]) << "\n";
}

void print_rmax(std::ostream& os, const McmModel& m, const RmaxReport& r) {
    os << "breakpoints:";
    for (double b : r.breakpoints) os << " " << num(b);
    os << "\n";
    if (r.has_witness) {
        os << "witness policy " << format_policy(m, r.witness_policy);
        if (r.nominal_reducible)
            os << " (reducible under the nominal kernel)";
        else {
            os << ", partition ";
            print_partition(os, m, r.witness_partition);
        }
        os << (r.nominal_reducible ? "\n" : "");
        os << "reducible at r_max: " << (r.reducible_at_rmax ? "yes" : "no") << "\n";
    } else {
        os << "no policy becomes reducible on [0, 2]\n";
    }
    os << "r_max = " << num(r.r_max) << "\n";
}

void print_sweep(std::ostream& os, const McmModel& m, const SweepResult& r) {
    os << "algorithm: " << to_string(r.algorithm) << "\n";
    for (const auto& row : r.rows) {
        os << "R = " << num(row.radius) << "  " << to_string(row.stop_reason);
        if (row.gain.size()) {
            os << "  policy " << format_policy(m, row.policy) << "  gain " << gain_text(row.gain)
               << "  Q* " << (row.irreducible ? "irreducible" : "reducible");
        } else if (!row.message.empty()) {
            os << "  " << row.message;
        }
        os << "\n";
    }
    os << "gain nondecreasing in R: " << (r.gain_monotone ? "yes" : "no") << "\n";
}

}  // namespace rmdp::report
