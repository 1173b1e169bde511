#include "rmdp/finite_horizon.hpp"

#include <stdexcept>

#include "rmdp/worst_case.hpp"

namespace rmdp {

FiniteHorizonResult finite_horizon_solve(const McmModel& m, int horizon, const Vector& terminal,
                                         double tol) {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    if (terminal.size() != m.n_states())
        throw std::invalid_argument("terminal vector needs one entry per state");
    if (!terminal.allFinite()) throw std::invalid_argument("terminal vector must be finite");

    FiniteHorizonResult r;
    r.terminal = terminal;
    r.value_functions.assign(horizon + 1, Vector());
    r.greedy_policies.assign(horizon, Policy(m.n_states()));
    r.oscillation_gap.assign(horizon, 0.0);
    r.value_functions[horizon] = terminal;

    for (int j = horizon - 1; j >= 0; --j) {
        const Vector& next = r.value_functions[j + 1];
        const Matrix q = robust_q_values(m, next, tol);
        Vector v = row_minima(q);
        for (int x = 0; x < m.n_states(); ++x)
            r.greedy_policies[j][x] = argmin_control(q, x, m.feasible[x], -1, tol);
        r.oscillation_gap[j] = max_abs(row_minima(oscillation_q_values(m, next)) - v);
        r.value_functions[j] = std::move(v);
    }
    return r;
}

}  // namespace rmdp
