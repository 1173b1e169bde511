#include "rmdp/worst_case.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace rmdp {

Kernel worst_case_kernel(const McmModel& m, const SupportPartition& part) {
    Kernel k = m.nominal;
    for (int u = 0; u < m.n_controls(); ++u)
        for (int x = 0; x < m.n_states(); ++x) {
            if (!m.is_feasible(x, u)) continue;
            k[u].row(x) =
                waterfill_row(m.nominal[u].row(x).transpose(), part, m.radius).distribution;
        }
    return k;
}

Kernel worst_case_kernel(const McmModel& m, const Vector& values, double tol) {
    return worst_case_kernel(m, partition_support(values, tol));
}

namespace {

Vector levels(const Vector& v, double tol) {
    const auto n = v.size();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v(a) < v(b); });
    Vector out = Vector::Zero(n);
    double level = 0.0;
    double base = n ? v(order[0]) : 0.0;
    for (Eigen::Index k = 1; k < n; ++k) {
        if (v(order[k]) - base > tol) {
            level += 1.0;
            base = v(order[k]);
        }
        out(order[k]) = level;
    }
    return out;
}

}  // namespace

Vector lexicographic_key(const Vector& gain, const Vector& bias, double tol) {
    const double stride = static_cast<double>(gain.size() + 1);
    return levels(gain, tol) * stride + levels(bias, tol);
}

Matrix robust_q_values(const McmModel& m, const Vector& values, double tol) {
    const auto part = partition_support(values, tol);
    Matrix q = Matrix::Constant(m.n_states(), m.n_controls(),
                                std::numeric_limits<double>::infinity());
    for (int x = 0; x < m.n_states(); ++x)
        for (int u : m.feasible[x])
            q(x, u) = m.cost(x, u) +
                      waterfill_row(m.nominal[u].row(x).transpose(), part, m.radius, tol)
                          .distribution.dot(values);
    return q;
}

Matrix oscillation_q_values(const McmModel& m, const Vector& values) {
    Matrix q = Matrix::Constant(m.n_states(), m.n_controls(),
                                std::numeric_limits<double>::infinity());
    for (int x = 0; x < m.n_states(); ++x)
        for (int u : m.feasible[x])
            q(x, u) = m.cost(x, u) +
                      oscillation_payoff(m.nominal[u].row(x).transpose(), values, m.radius);
    return q;
}

Matrix kernel_q_values(const McmModel& m, const Kernel& kernel, const Vector& values,
                       bool with_cost) {
    Matrix q = Matrix::Constant(m.n_states(), m.n_controls(),
                                std::numeric_limits<double>::infinity());
    for (int x = 0; x < m.n_states(); ++x)
        for (int u : m.feasible[x])
            q(x, u) = (with_cost ? m.cost(x, u) : 0.0) + kernel[u].row(x).dot(values);
    return q;
}

Vector row_minima(const Matrix& q) { return q.rowwise().minCoeff(); }

int argmin_control(const Matrix& q, int x, const std::vector<int>& candidates, int incumbent,
                   double tol) {
    double best = std::numeric_limits<double>::infinity();
    for (int u : candidates) best = std::min(best, q(x, u));
    if (incumbent >= 0 && q(x, incumbent) <= best + tol) return incumbent;
    for (int u : candidates)
        if (q(x, u) <= best + tol) return u;
    return candidates.front();
}

}  // namespace rmdp
