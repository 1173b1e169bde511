#include "rmdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rmdp {

bool McmModel::is_feasible(int x, int u) const {
    const auto& f = feasible.at(static_cast<std::size_t>(x));
    return std::find(f.begin(), f.end(), u) != f.end();
}

int McmModel::state_index(const std::string& name) const {
    auto it = std::find(states.begin(), states.end(), name);
    return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

int McmModel::control_index(const std::string& name) const {
    auto it = std::find(controls.begin(), controls.end(), name);
    return it == controls.end() ? -1 : static_cast<int>(it - controls.begin());
}

namespace {

std::string pair_location(const McmModel& m, int x, int u) {
    return "(" + m.states[x] + ", " + m.controls[u] + ")";
}

template <class Names>
void check_unique(const Names& names, const char* what, std::vector<ValidationError>& out) {
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j])
                out.push_back({std::string(what) + " " + names[i], "duplicate identifier"});
}

}  // namespace

std::vector<ValidationError> validate(const McmModel& m, double tol) {
    std::vector<ValidationError> errs;
    const int n = m.n_states();
    const int k = m.n_controls();

    if (n == 0) errs.push_back({"states", "at least one state is required"});
    if (k == 0) errs.push_back({"controls", "at least one control is required"});
    check_unique(m.states, "state", errs);
    check_unique(m.controls, "control", errs);

    if (!(m.radius >= 0.0 && m.radius <= 2.0))
        errs.push_back({"radius", "radius " + std::to_string(m.radius) + " is outside [0, 2]"});

    if (static_cast<int>(m.feasible.size()) != n) {
        errs.push_back({"feasible", "expected one feasible set per state"});
        return errs;
    }
    for (int x = 0; x < n; ++x) {
        if (m.feasible[x].empty())
            errs.push_back({"feasible[" + m.states[x] + "]", "no feasible control"});
        for (int u : m.feasible[x])
            if (u < 0 || u >= k)
                errs.push_back({"feasible[" + m.states[x] + "]", "references an unknown control"});
    }
    if (static_cast<int>(m.nominal.size()) != k) {
        errs.push_back({"kernel", "expected one matrix per control"});
        return errs;
    }
    if (m.cost.rows() != n || m.cost.cols() != k) {
        errs.push_back({"cost", "expected one cost per state and control"});
        return errs;
    }
    for (int u = 0; u < k; ++u) {
        if (m.nominal[u].rows() != n || m.nominal[u].cols() != n) {
            errs.push_back({"kernel[" + m.controls[u] + "]", "matrix is not |X| x |X|"});
            continue;
        }
        for (int x = 0; x < n; ++x) {
            if (!m.is_feasible(x, u)) continue;
            const auto row = m.nominal[u].row(x);
            bool finite = true;
            for (int z = 0; z < n; ++z) {
                const double p = row(z);
                if (!std::isfinite(p)) {
                    finite = false;
                    errs.push_back({pair_location(m, x, u), "non-finite probability"});
                } else if (p < 0.0) {
                    errs.push_back({pair_location(m, x, u),
                                    "negative entry toward " + m.states[z]});
                } else if (p > 1.0 + tol) {
                    errs.push_back({pair_location(m, x, u),
                                    "entry toward " + m.states[z] + " exceeds 1"});
                }
            }
            if (finite && std::abs(row.sum() - 1.0) > tol) {
                std::ostringstream s;
                s.precision(12);
                s << "row sums to " << row.sum();
                errs.push_back({pair_location(m, x, u), s.str()});
            }
            const double c = m.cost(x, u);
            if (!std::isfinite(c) || c < 0.0)
                errs.push_back({pair_location(m, x, u), "cost must be finite and non-negative"});
        }
    }
    return errs;
}

void check_policy(const McmModel& m, const Policy& g) {
    if (static_cast<int>(g.size()) != m.n_states())
        throw std::invalid_argument("policy must assign one control to each of the " +
                                    std::to_string(m.n_states()) + " states");
    for (int x = 0; x < m.n_states(); ++x) {
        if (g[x] < 0 || g[x] >= m.n_controls() || !m.is_feasible(x, g[x]))
            throw std::invalid_argument("policy control at state " + m.states[x] +
                                        " is not feasible there");
    }
}

Matrix restrict(const Kernel& kernel, const Policy& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Matrix P(n, n);
    for (Eigen::Index x = 0; x < n; ++x) P.row(x) = kernel[g[x]].row(x);
    return P;
}

Vector restrict_cost(const McmModel& m, const Policy& g) {
    Vector f(m.n_states());
    for (int x = 0; x < m.n_states(); ++x) f(x) = m.cost(x, g[x]);
    return f;
}

Policy first_feasible_policy(const McmModel& m) {
    Policy g(m.n_states());
    for (int x = 0; x < m.n_states(); ++x) g[x] = m.feasible[x].front();
    return g;
}

double policy_count(const McmModel& m) {
    double c = 1.0;
    for (const auto& f : m.feasible) {
        c *= static_cast<double>(f.size());
        if (!std::isfinite(c)) return std::numeric_limits<double>::max();
    }
    return c;
}

void for_each_policy(const McmModel& m, const std::function<bool(const Policy&)>& visit) {
    const int n = m.n_states();
    std::vector<std::size_t> pos(n, 0);
    Policy g = first_feasible_policy(m);
    while (true) {
        if (!visit(g)) return;
        int x = n - 1;
        while (x >= 0) {
            if (++pos[x] < m.feasible[x].size()) {
                g[x] = m.feasible[x][pos[x]];
                break;
            }
            pos[x] = 0;
            g[x] = m.feasible[x][0];
            --x;
        }
        if (x < 0) return;
    }
}

std::string format_policy(const McmModel& m, const Policy& g) {
    std::string s = "(";
    for (std::size_t x = 0; x < g.size(); ++x) {
        if (x) s += ",";
        s += m.controls[g[x]];
    }
    return s + ")";
}

}  // namespace rmdp
