#include <doctest.h>

#include <functional>

#include "classical_pi.hpp"
#include "fixtures.hpp"
#include "game_oracle.hpp"
#include "lp_simplex.hpp"
#include "random_models.hpp"
#include "rmdp/finite_horizon.hpp"
#include "rmdp/policy_iteration.hpp"
#include "rmdp/simulate.hpp"
#include "rmdp/worst_case.hpp"

using namespace rmdp;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

Matrix ninths(std::initializer_list<std::initializer_list<int>> rows) {
    Matrix P(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (int v : r) P(i, j++) = v / 9.0;
        ++i;
    }
    return P;
}

double maxdiff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::vector<double> stdvec(const Vector& v) { return {v.data(), v.data() + v.size()}; }

McmModel single_state() {
    McmModel m;
    m.states = {"only"};
    m.controls = {"a", "b"};
    m.feasible = {{0, 1}};
    m.nominal = {Matrix::Ones(1, 1), Matrix::Ones(1, 1)};
    m.cost = Matrix(1, 2);
    m.cost << 2.0, 0.5;
    m.radius = 1.0;
    return m;
}

McmModel with_radius(McmModel m, double r) {
    m.radius = r;
    return m;
}

}  // namespace

TEST_CASE("worst-case kernel of the first worked example") {
    const auto m = oracle::load_fixture("sec5_1.json");
    const Kernel K = worst_case_kernel(m, vec({1.8, 3.375, 0}));
    CHECK(maxdiff(K[0], ninths({{3, 4, 2}, {4, 5, 0}, {0, 9, 0}})) < 1e-15);
    CHECK(maxdiff(K[1], ninths({{1, 5, 3}, {4, 5, 0}, {4, 4, 1}})) < 1e-15);
}

TEST_CASE("worst-case kernel of the second worked example") {
    const auto m = oracle::load_fixture("sec5_2.json");
    const Kernel K = worst_case_kernel(m, vec({0.666, 1, 0}));
    CHECK(maxdiff(K[0], ninths({{0, 9, 0}, {0, 9, 0}, {0, 7, 2}})) < 1e-15);
    CHECK(maxdiff(K[1], ninths({{0, 9, 0}, {0, 9, 0}, {2, 7, 0}})) < 1e-15);
}

TEST_CASE("zero radius keeps the nominal kernel") {
    const auto m = with_radius(oracle::load_fixture("sec5_1.json"), 0.0);
    const Kernel K = worst_case_kernel(m, vec({1.8, 3.375, 0}));
    for (int u = 0; u < 2; ++u) CHECK(maxdiff(K[u], m.nominal[u]) == 0.0);
}

TEST_CASE("finite horizon with zero terminal picks the cheapest control") {
    const auto m = oracle::load_fixture("sec5_1.json");
    const auto r = finite_horizon_solve(m, 1, Vector::Zero(3));
    CHECK((r.value_functions[0] - vec({0.5, 1, 0})).norm() == 0.0);
    CHECK(r.greedy_policies[0] == Policy{1, 0, 1});
    CHECK(r.value_functions[1].norm() == 0.0);
}

TEST_CASE("finite horizon stage values of the first worked example") {
    const auto m = oracle::load_fixture("sec5_1.json");
    const auto a = finite_horizon_solve(m, 1, vec({1.8, 3.375, 0}));
    CHECK(maxdiff(a.value_functions[0], vec({2.575, 3.675, 2.3})) < 1e-12);
    CHECK(a.greedy_policies[0] == Policy{1, 0, 1});
    // The oscillation form overstates state 3 under u1 but not the minimum.
    const auto b = finite_horizon_solve(m, 1, vec({0.46875, 1.125, 0}));
    CHECK(maxdiff(b.value_functions[0], vec({113.0 / 96, 11.0 / 6, 17.0 / 24})) < 1e-12);
    CHECK(b.greedy_policies[0] == Policy{1, 0, 1});
}

TEST_CASE("finite horizon stages agree with explicit worst-case kernels and the LP") {
    oracle::Rng rng(61);
    for (int t = 0; t < 60; ++t) {
        const int n = 2 + t % 3;
        const auto m = oracle::random_model(rng, n, 2, oracle::uniform(rng, 0, 2), t % 2);
        Vector term(n);
        for (int i = 0; i < n; ++i) term(i) = oracle::uniform(rng, 0, 4);
        const auto r = finite_horizon_solve(m, 3, term);
        for (int j = 0; j < 3; ++j) {
            const Vector& next = r.value_functions[j + 1];
            const Matrix q = kernel_q_values(m, worst_case_kernel(m, next), next);
            CHECK(maxdiff(row_minima(q), r.value_functions[j]) < 1e-9);
            for (int x = 0; x < n; ++x) {
                double best = 1e300;
                for (int u : m.feasible[x]) {
                    const Vector mu = m.nominal[u].row(x).transpose();
                    best = std::min(best, m.cost(x, u) + oracle::tv_ball_max_lp(
                                                             stdvec(mu), stdvec(next), m.radius)
                                                             .value);
                }
                CHECK(std::abs(best - r.value_functions[j](x)) < 1e-9);
            }
        }
    }
}

TEST_CASE("finite horizon at full radius matches a game-tree search") {
    oracle::Rng rng(67);
    for (int t = 0; t < 30; ++t) {
        const int n = 1 + t % 3;
        const int horizon = 1 + t % 3;
        const auto m = oracle::random_model(rng, n, 2, 2.0, true);
        Vector term(n);
        for (int i = 0; i < n; ++i) term(i) = oracle::uniform(rng, -1, 3);
        // Control moves, then the adversary sends the chain to any state.
        std::function<double(int, int)> game = [&](int x, int depth) {
            if (depth == horizon) return term(x);
            double best = 1e300;
            for (int u : m.feasible[x]) {
                double worst = -1e300;
                for (int z = 0; z < n; ++z) worst = std::max(worst, game(z, depth + 1));
                best = std::min(best, m.cost(x, u) + worst);
            }
            return best;
        };
        const auto r = finite_horizon_solve(m, horizon, term);
        for (int x = 0; x < n; ++x) CHECK(r.value_functions[0](x) == doctest::Approx(game(x, 0)));
    }
}

TEST_CASE("unichain evaluation examples") {
    const auto m = oracle::load_fixture("sec5_1.json");
    const Policy g0{0, 1, 1};
    const auto nominal = std::get<Evaluation>(evaluate_unichain(m, m.nominal, g0, 2));
    CHECK(nominal.gain(0) == doctest::Approx(1.175).epsilon(1e-12));
    CHECK(maxdiff(nominal.bias, vec({1.8, 3.375, 0})) < 1e-12);

    const Kernel K = worst_case_kernel(m, nominal.bias);
    const auto robust = std::get<Evaluation>(evaluate_unichain(m, K, g0, 2));
    CHECK(robust.gain(0) == doctest::Approx(2.3).epsilon(1e-12));
    CHECK(maxdiff(robust.bias, vec({1.8, 3.375, 0})) < 1e-12);
}

TEST_CASE("unichain evaluation reports the counterexample as inconsistent") {
    const auto m = oracle::load_fixture("sec3_counterexample.json");
    const auto r = evaluate_unichain(m, m.nominal, {0, 0, 0}, 2);
    REQUIRE(std::holds_alternative<EvaluationFailure>(r));
    const auto& f = std::get<EvaluationFailure>(r);
    CHECK(f.reason.find("inconsistent") != std::string::npos);
    CHECK(f.classes.recurrent().size() == 2);
    CHECK(f.class_gains == std::vector<double>{1.0, 3.0});
    const std::string text = describe_failure(f, m.states);
    CHECK(text.find("{2}") != std::string::npos);
    CHECK(text.find("{3}") != std::string::npos);
}

TEST_CASE("constant cost gives constant gain and zero bias") {
    oracle::Rng rng(71);
    for (int t = 0; t < 20; ++t) {
        const int n = 1 + t % 5;
        const Matrix P = oracle::random_stochastic(rng, n, false);
        const auto e = std::get<Evaluation>(evaluate_unichain(P, Vector::Constant(n, 1.25), n - 1));
        CHECK((e.gain.array() - 1.25).abs().maxCoeff() < 1e-12);
        CHECK(e.bias.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("multichain evaluation of the counterexample policy") {
    const auto m = oracle::load_fixture("sec5_2.json");
    const auto e = evaluate_multichain(m, m.nominal, {0, 0, 0});
    CHECK(maxdiff(e.gain, vec({17.0 / 9, 1, 3})) < 1e-12);
    CHECK(maxdiff(e.bias, vec({1.0 / 9, 0, 0})) < 1e-12);
    CHECK(e.anchors == std::vector<int>{1, 2});
    CHECK_FALSE(e.unichain);

    // Free constants chosen per recurrent class.
    const auto pinned = evaluate_multichain(m, m.nominal, {0, 0, 0}, {{1, 1.0}, {2, 0.0}});
    CHECK(maxdiff(pinned.bias, vec({1.0 / 9 + 5.0 / 9, 1, 0})) < 1e-12);
    CHECK(bias_equation_residual(restrict(m.nominal, {0, 0, 0}), restrict_cost(m, {0, 0, 0}),
                                 pinned) < 1e-12);
}

TEST_CASE("property: multichain evaluation specializes to unichain") {
    oracle::Rng rng(73);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + t % 6;
        const Matrix P = oracle::random_stochastic(rng, n, t % 2);
        if (!is_irreducible(P)) continue;
        Vector f(n);
        for (int i = 0; i < n; ++i) f(i) = oracle::uniform(rng, 0, 5);
        const auto u = std::get<Evaluation>(evaluate_unichain(P, f, n - 1));
        const auto mc = evaluate_multichain(P, f);
        CHECK(maxdiff(mc.gain, u.gain) < 1e-10);
        const Vector shifted = (u.bias.array() - u.bias(0)).matrix();
        CHECK(maxdiff(mc.bias, shifted) < 1e-9);
    }
}

TEST_CASE("property: multichain residuals on arbitrary chains") {
    oracle::Rng rng(79);
    for (int t = 0; t < 300; ++t) {
        const int n = 1 + t % 7;
        const Matrix P = oracle::random_stochastic(rng, n, true);
        Vector f(n);
        for (int i = 0; i < n; ++i) f(i) = oracle::uniform(rng, 0, 5);
        const auto e = evaluate_multichain(P, f);
        CHECK(gain_equation_residual(P, e) < 1e-9);
        CHECK(bias_equation_residual(P, f, e) < 1e-9);
        CHECK(maxdiff(e.gain, oracle::cesaro_projection(P) * f) < 1e-8);
    }
}

TEST_CASE("unichain policy iteration on the first worked example") {
    const auto m = oracle::load_fixture("sec5_1.json");
    const auto r = policy_iteration_unichain(m, {0, 1, 1});
    CHECK(r.stop_reason == StopReason::converged);
    CHECK(r.final_policy == Policy{1, 0, 1});
    REQUIRE(r.final_evaluation);
    CHECK(r.final_evaluation->gain(0) == doctest::Approx(17.0 / 24).epsilon(1e-12));
    CHECK(maxdiff(r.final_evaluation->bias, vec({0.46875, 1.125, 0})) < 1e-12);
    REQUIRE(r.iterations.size() == 2);
    CHECK(r.iterations[0].improved == Policy{1, 0, 1});
    CHECK(r.iterations[0].robust.gain(0) == doctest::Approx(2.3));
    CHECK(r.iterations[0].q(2, 0) == doctest::Approx(6.375));
    CHECK(r.residuals.dp <= 1e-6);
    CHECK(r.residuals.policy_attains);
    CHECK(r.gain_monotone);
    CHECK(r.refinement_rounds == 0);
}

TEST_CASE("unichain policy iteration stops on the counterexample") {
    const auto m = oracle::load_fixture("sec3_counterexample.json");
    const auto r = policy_iteration_unichain(m, {0, 0, 0});
    CHECK(r.stop_reason == StopReason::evaluation_failure);
    REQUIRE(r.failure);
    CHECK(r.failure->reason.find("inconsistent") != std::string::npos);
}

TEST_CASE("general policy iteration on the second worked example") {
    const auto m = oracle::load_fixture("sec5_2.json");
    for (const BiasPins& pins : {BiasPins{}, BiasPins{{1, 1.0}, {2, 0.0}}}) {
        PolicyIterationOptions opt;
        opt.pins = pins;
        const auto r = policy_iteration_general(m, {0, 0, 0}, opt);
        CHECK(r.stop_reason == StopReason::converged);
        CHECK(r.final_policy == Policy{1, 0, 1});
        REQUIRE(r.final_evaluation);
        const Vector& h = r.final_evaluation->bias;
        CHECK(maxdiff(r.final_evaluation->gain, Vector::Ones(3)) < 1e-12);
        CHECK(h(0) - h(2) == doctest::Approx(11.0 / 18));
        CHECK(h(1) - h(2) == doctest::Approx(10.0 / 9));
        CHECK(r.residuals.dp <= 1e-6);
        const Vector J = average_cost_of_policy(m, r.final_policy, r.final_kernel);
        CHECK(maxdiff(J, Vector::Ones(3)) < 1e-12);
    }
}

TEST_CASE("both algorithms agree on the first worked example") {
    const auto m = oracle::load_fixture("sec5_1.json");
    const auto a = policy_iteration_unichain(m, {0, 1, 1});
    const auto b = policy_iteration_general(m, {0, 1, 1});
    CHECK(a.final_policy == b.final_policy);
    CHECK(maxdiff(a.final_evaluation->gain, b.final_evaluation->gain) < 1e-12);
    const Vector J = average_cost_of_policy(m, a.final_policy, a.final_kernel);
    CHECK(J(0) == doctest::Approx(17.0 / 24).epsilon(1e-12));
}

TEST_CASE("single-state model picks the cheaper control") {
    const auto m = single_state();
    for (const auto& r : {policy_iteration_unichain(m, {0}), policy_iteration_general(m, {0})}) {
        CHECK(r.stop_reason == StopReason::converged);
        CHECK(r.final_policy == Policy{1});
        CHECK(r.final_evaluation->gain(0) == 0.5);
    }
}

TEST_CASE("zero radius reduces to classical policy iteration") {
    const auto m = with_radius(oracle::load_fixture("sec5_1.json"), 0.0);
    const auto r = policy_iteration_unichain(m, {0, 1, 1});
    const auto c = oracle::classical_policy_iteration(m, {0, 1, 1});
    CHECK(r.final_policy == c.policy);
    CHECK(r.final_evaluation->gain(0) == doctest::Approx(c.gain).epsilon(1e-12));
    CHECK(r.residuals.dp <= 1e-6);

    oracle::Rng rng(83);
    for (int t = 0; t < 40; ++t) {
        const auto rm = oracle::random_model(rng, 2 + t % 4, 2 + t % 2, 0.0, false);
        const Policy g0 = first_feasible_policy(rm);
        const auto a = policy_iteration_unichain(rm, g0);
        const auto b = policy_iteration_general(rm, g0);
        const auto cl = oracle::classical_policy_iteration(rm, g0);
        REQUIRE(a.stop_reason == StopReason::converged);
        CHECK(std::abs(a.final_evaluation->gain(0) - cl.gain) < 1e-9);
        CHECK(std::abs(b.final_evaluation->gain(0) - cl.gain) < 1e-9);
    }
}

TEST_CASE("average cost of absorbing chains is the per-state cost") {
    const auto m = oracle::load_fixture("sec5_1.json");
    const Kernel I(2, Matrix::Identity(3, 3));
    CHECK(maxdiff(average_cost_of_policy(m, {1, 0, 1}, I), vec({0.5, 1, 0})) == 0.0);
}

TEST_CASE("SplitMix64 reference output") {
    SplitMix64 r(0);
    CHECK(r.next() == 0xe220a8397b1dcdafULL);
    CHECK(r.next() == 0x6e789e6aa1b965f4ULL);
    SplitMix64 s(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = s.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("simulation examples") {
    McmModel cyc;
    cyc.states = {"a", "b", "c"};
    cyc.controls = {"u"};
    cyc.feasible = {{0}, {0}, {0}};
    cyc.nominal = {Matrix(3, 3)};
    cyc.nominal[0] << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    cyc.cost = Matrix(3, 1);
    cyc.cost << 1, 2, 3;
    CHECK(simulate_average_cost(cyc, {0, 0, 0}, cyc.nominal, 3000, 5, 0) == 2.0);
    CHECK(simulate_average_cost(cyc, {0, 0, 0}, cyc.nominal, 1, 5, 2) == 3.0);

    const auto m = oracle::load_fixture("sec5_1.json");
    const auto r = policy_iteration_unichain(m, {0, 1, 1});
    const double a = simulate_average_cost(m, r.final_policy, r.final_kernel, 1000000, 1, 0);
    CHECK(std::abs(a - 17.0 / 24) < 5e-3);
    CHECK(simulate_average_cost(m, r.final_policy, r.final_kernel, 1000, 9, 1) ==
          simulate_average_cost(m, r.final_policy, r.final_kernel, 1000, 9, 1));
}

TEST_CASE("property: min-max stage operator matches the LP state by state") {
    oracle::Rng rng(89);
    double worst = 0.0;
    for (int t = 0; t < 150; ++t) {
        const int n = 1 + t % 5;
        const int k = 1 + t % 3;
        const auto m = oracle::random_model(rng, n, k, oracle::uniform(rng, 0, 2), t % 2);
        Vector V(n);
        for (int i = 0; i < n; ++i) V(i) = oracle::uniform(rng, -3, 3);
        const Vector exact = row_minima(robust_q_values(m, V));
        for (int x = 0; x < n; ++x) {
            double best = 1e300;
            for (int u : m.feasible[x])
                best = std::min(best, m.cost(x, u) +
                                          oracle::tv_ball_max_lp(
                                              stdvec(m.nominal[u].row(x).transpose()), stdvec(V),
                                              m.radius)
                                              .value);
            worst = std::max(worst, std::abs(best - exact(x)));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("property: robust policy values match the vertex game") {
    oracle::Rng rng(97);
    for (int t = 0; t < 40; ++t) {
        const int n = 1 + t % 3;
        const auto m = oracle::random_model(rng, n, 2, oracle::uniform(rng, 0, 2), t % 2);
        for_each_policy(m, [&](const Policy& g) {
            const auto v = robust_policy_evaluation(m, g);
            CHECK(maxdiff(v.evaluation.gain, oracle::policy_game_gain(m, g)) < 1e-7);
            return true;
        });
    }
}

TEST_CASE("property: converged runs satisfy their optimality equations and the game value") {
    oracle::Rng rng(101);
    int converged_unichain = 0;
    for (int t = 0; t < 80; ++t) {
        const int n = 1 + t % 3;
        const auto m = oracle::random_model(rng, n, 2, oracle::uniform(rng, 0, 2), t % 3 == 0);
        const Policy g0 = first_feasible_policy(m);
        const Vector oracle_gain = oracle::minmax_gain(m);

        const auto gen = policy_iteration_general(m, g0);
        REQUIRE(gen.stop_reason == StopReason::converged);
        CHECK(gen.residuals.dp <= 1e-6);
        CHECK(gen.residuals.policy_attains);
        CHECK(maxdiff(gen.final_evaluation->gain, oracle_gain) < 1e-6);
        CHECK(gen.iterations.size() <= static_cast<std::size_t>(default_max_iter(m)) + 1);

        const auto uni = policy_iteration_unichain(m, g0);
        if (uni.stop_reason == StopReason::converged) {
            ++converged_unichain;
            CHECK(uni.residuals.dp <= 1e-6);
            CHECK(maxdiff(uni.final_evaluation->gain, oracle_gain) < 1e-6);
        } else {
            CHECK(uni.stop_reason == StopReason::evaluation_failure);
        }
    }
    CHECK(converged_unichain > 20);
}

TEST_CASE("iteration cap is reported") {
    const auto m = oracle::load_fixture("sec5_1.json");
    PolicyIterationOptions opt;
    opt.max_iter = 1;
    const auto r = policy_iteration_unichain(m, {0, 1, 1}, opt);
    CHECK(r.stop_reason == StopReason::iteration_cap);
    CHECK(default_max_iter(m) == 8);
}

TEST_CASE("infeasible starting policy is rejected") {
    auto m = oracle::load_fixture("sec5_1.json");
    m.feasible[1] = {0};
    CHECK_THROWS_AS(policy_iteration_unichain(m, {0, 1, 1}), std::invalid_argument);
}
