#include "rmdp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rmdp {

namespace {

std::vector<double> recurrent_gains(const Matrix& P, const Vector& f, const ClassDecomposition& d) {
    std::vector<double> out;
    for (const auto* c : d.recurrent()) {
        const Vector q = class_invariant_distribution(P, c->states);
        double g = 0.0;
        for (std::size_t k = 0; k < c->states.size(); ++k) g += q(k) * f(c->states[k]);
        out.push_back(g);
    }
    return out;
}

std::string failure_text(const EvaluationFailure& f, const std::vector<std::string>& names) {
    std::ostringstream s;
    s.precision(6);
    const auto rec = f.classes.recurrent();
    double lo = 0.0, hi = 0.0;
    if (!f.class_gains.empty()) {
        lo = *std::min_element(f.class_gains.begin(), f.class_gains.end());
        hi = *std::max_element(f.class_gains.begin(), f.class_gains.end());
    }
    s << (hi - lo > tolerance() ? "inconsistent system" : "singular system");
    if (rec.size() > 1) {
        s << ": recurrent classes";
        for (std::size_t k = 0; k < rec.size(); ++k)
            s << (k ? (k + 1 == rec.size() ? " and " : ", ") : " ")
              << describe_class(rec[k]->states, names);
        s << (hi - lo > tolerance() ? " force conflicting gains" : " with gains");
        for (std::size_t k = 0; k < f.class_gains.size(); ++k)
            s << (k ? (k + 1 == f.class_gains.size() ? " and " : ", ") : " ") << f.class_gains[k];
    }
    return s.str();
}

double scale(const Vector& f) { return std::max(1.0, max_abs(f)); }

}  // namespace

UnichainResult evaluate_unichain(const Matrix& P, const Vector& f, int anchor, double tol) {
    const int n = static_cast<int>(P.rows());
    if (anchor < 0 || anchor >= n) throw std::invalid_argument("anchor state out of range");

    // Unknowns: J, then V at every state except the anchor.
    Matrix A = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        int col = 1;
        for (int j = 0; j < n; ++j) {
            if (j == anchor) continue;
            A(i, col++) = (i == j ? 1.0 : 0.0) - P(i, j);
        }
    }
    auto sol = solve_dense(A, f);

    Evaluation e;
    e.classes = communication_classes(P);
    if (sol) {
        e.gain = Vector::Constant(n, (*sol)(0));
        e.bias = Vector::Zero(n);
        int col = 1;
        for (int j = 0; j < n; ++j)
            if (j != anchor) e.bias(j) = (*sol)(col++);
        e.anchors = {anchor};
        e.unichain = true;
        if (bias_equation_residual(P, f, e) <= tol * scale(f)) return e;
    }

    EvaluationFailure fail;
    fail.classes = std::move(e.classes);
    fail.class_gains = recurrent_gains(P, f, fail.classes);
    fail.reason = failure_text(fail, {});
    return fail;
}

Evaluation evaluate_multichain(const Matrix& P, const Vector& f, const BiasPins& pins) {
    const int n = static_cast<int>(P.rows());
    Evaluation e;
    e.classes = communication_classes(P);
    e.gain = cesaro_limit(P, e.classes) * f;
    e.unichain = e.classes.recurrent().size() == 1;

    Matrix A = Matrix::Identity(n, n) - P;
    Vector b = f - e.gain;
    for (const auto* c : e.classes.recurrent()) {
        int anchor = c->states.front();
        double value = 0.0;
        for (int s : c->states) {
            auto it = pins.find(s);
            if (it != pins.end()) {
                anchor = s;
                value = it->second;
                break;
            }
        }
        // The anchor's own balance row is implied by the others in its class.
        A.row(anchor).setZero();
        A(anchor, anchor) = 1.0;
        b(anchor) = value;
        e.anchors.push_back(anchor);
    }
    auto h = solve_dense(A, b);
    if (!h) throw std::runtime_error("bias system is singular");
    e.bias = *h;
    return e;
}

UnichainResult evaluate_unichain(const McmModel& m, const Kernel& kernel, const Policy& g,
                                 int anchor, double tol) {
    check_policy(m, g);
    auto r = evaluate_unichain(restrict(kernel, g), restrict_cost(m, g), anchor, tol);
    if (auto* f = std::get_if<EvaluationFailure>(&r)) f->reason = failure_text(*f, m.states);
    return r;
}

Evaluation evaluate_multichain(const McmModel& m, const Kernel& kernel, const Policy& g,
                               const BiasPins& pins) {
    check_policy(m, g);
    return evaluate_multichain(restrict(kernel, g), restrict_cost(m, g), pins);
}

Vector average_cost_of_policy(const McmModel& m, const Policy& g, const Kernel& kernel) {
    check_policy(m, g);
    return cesaro_limit(restrict(kernel, g)) * restrict_cost(m, g);
}

double bias_equation_residual(const Matrix& P, const Vector& f, const Evaluation& e) {
    return max_abs(e.gain + e.bias - f - P * e.bias);
}

double gain_equation_residual(const Matrix& P, const Evaluation& e) {
    return max_abs(e.gain - P * e.gain);
}

std::string describe_failure(const EvaluationFailure& f, const std::vector<std::string>& names) {
    return failure_text(f, names);
}

}  // namespace rmdp
