#include <doctest.h>

#include "classical_pi.hpp"
#include "fixtures.hpp"
#include "random_models.hpp"
#include "rmdp/robustness.hpp"

using namespace rmdp;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

SupportPartition nominal_partition(const McmModel& m, const Policy& g) {
    const auto e = std::get<Evaluation>(evaluate_unichain(m, m.nominal, g, m.n_states() - 1));
    return partition_support(e.bias);
}

bool any_reducible(const McmModel& m, double R) {
    bool found = false;
    for_each_policy(m, [&](const Policy& g) {
        found = !is_irreducible(worst_case_restriction(m, g, nominal_partition(m, g), R));
        return !found;
    });
    return found;
}

McmModel one_state() {
    McmModel m;
    m.states = {"x"};
    m.controls = {"a", "b"};
    m.feasible = {{0, 1}};
    m.nominal = {Matrix::Ones(1, 1), Matrix::Ones(1, 1)};
    m.cost = Matrix(1, 2);
    m.cost << 1.0, 2.0;
    m.radius = 0.5;
    return m;
}

}  // namespace

TEST_CASE("row breakpoints of a hand example") {
    const auto part = partition_support(vec({1.8, 3.375, 0}));
    const auto b = row_breakpoints(vec({3, 1, 5}) / 9.0, part);
    REQUIRE(b.size() == 2);
    CHECK(b[0] == doctest::Approx(10.0 / 9));
    CHECK(b[1] == doctest::Approx(16.0 / 9));
}

TEST_CASE("a single state has no breakpoints and the full radius range") {
    const auto m = one_state();
    CHECK(radius_breakpoints(m).empty());
    const auto r = compute_rmax(m);
    CHECK(r.r_max == 2.0);
    CHECK_FALSE(r.has_witness);
}

TEST_CASE("radius threshold of the first worked example") {
    const auto m = oracle::load_fixture("sec5_1.json");
    const auto r = compute_rmax(m);
    CHECK(r.r_max > 6.0 / 9);
    CHECK(r.r_max == doctest::Approx(8.0 / 9));
    CHECK(r.has_witness);
    CHECK(r.witness_policy == Policy{0, 1, 0});
    CHECK(r.reducible_at_rmax);
    CHECK_FALSE(r.nominal_reducible);
    CHECK(std::is_sorted(r.breakpoints.begin(), r.breakpoints.end()));
    CHECK_FALSE(r.allocation_rule.empty());
}

TEST_CASE("radius threshold of the second worked example") {
    const auto m = oracle::load_fixture("sec5_2.json");
    const auto b = radius_breakpoints(m);
    CHECK(std::any_of(b.begin(), b.end(), [](double x) { return x <= 14.0 / 9 + 1e-12; }));
    const auto r = compute_rmax(m);
    CHECK(r.r_max <= 14.0 / 9);
    CHECK(r.r_max == 0.0);
    CHECK(r.nominal_reducible);
    CHECK(r.has_witness);
}

TEST_CASE("policy enumeration beyond the cap is refused") {
    const auto m = oracle::load_fixture("sec5_1.json");
    CHECK_THROWS_AS(compute_rmax(m, 4), std::length_error);
    CHECK_NOTHROW(compute_rmax(m, 8));
}

TEST_CASE("the worked example's threshold agrees with a fine grid") {
    const auto m = oracle::load_fixture("sec5_1.json");
    const double rmax = compute_rmax(m).r_max;
    double first = 3.0;
    for (int k = 0; k <= 2000; ++k)
        if (any_reducible(m, k * 1e-3)) {
            first = k * 1e-3;
            break;
        }
    CHECK(first >= rmax - 1e-12);
    CHECK(first - rmax <= 1e-3 + 1e-12);
}

TEST_CASE("property: thresholds agree with a grid scan on random models") {
    oracle::Rng rng(107);
    for (int t = 0; t < 12; ++t) {
        const int n = 2 + t % 2;
        const auto m = oracle::random_model(rng, n, 2, 0.5, false);
        const auto r = compute_rmax(m);
        double first = 3.0;
        for (int k = 0; k <= 2000; ++k)
            if (any_reducible(m, k * 1e-3)) {
                first = k * 1e-3;
                break;
            }
        if (!r.has_witness) {
            CHECK(first == 3.0);
        } else {
            CHECK(first >= r.r_max - 1e-12);
            CHECK(first - r.r_max <= 1e-3 + 1e-12);
        }
    }
}

TEST_CASE("property: reducibility is constant between breakpoints") {
    oracle::Rng rng(109);
    for (int t = 0; t < 20; ++t) {
        const auto m = oracle::random_model(rng, 3, 2, 0.5, t % 2);
        std::vector<double> b = radius_breakpoints(m);
        b.insert(b.begin(), 0.0);
        b.push_back(2.0);
        for_each_policy(m, [&](const Policy& g) {
            const auto d = communication_classes(restrict(m.nominal, g));
            if (d.classes.size() != 1) return true;
            const auto part = nominal_partition(m, g);
            for (std::size_t i = 0; i + 1 < b.size(); ++i) {
                if (b[i + 1] - b[i] < 1e-9) continue;
                const auto at = [&](double s) {
                    return is_irreducible(
                        worst_case_restriction(m, g, part, b[i] + s * (b[i + 1] - b[i])));
                };
                CHECK(at(0.25) == at(0.5));
                CHECK(at(0.5) == at(0.75));
            }
            return true;
        });
    }
}

TEST_CASE("sweep of the first worked example") {
    const auto m = oracle::load_fixture("sec5_1.json");
    const auto s = sweep_radius(m, {0.0, 6.0 / 9}, Algorithm::unichain, {0, 1, 1});
    REQUIRE(s.rows.size() == 2);
    CHECK(s.rows[1].gain(0) == doctest::Approx(17.0 / 24));
    CHECK(s.rows[1].gain(0) >= s.rows[0].gain(0));
    CHECK(s.gain_monotone);
    CHECK(s.rows[0].irreducible);

    const auto c = oracle::classical_policy_iteration(m, {0, 1, 1});
    CHECK(s.rows[0].gain(0) == doctest::Approx(c.gain).epsilon(1e-12));
    CHECK(s.rows[0].policy == c.policy);
    CHECK(s.rows[0].residual <= 1e-6);
}

TEST_CASE("sweep of the second worked example") {
    const auto m = oracle::load_fixture("sec5_2.json");
    const auto uni = sweep_radius(m, {14.0 / 9}, Algorithm::unichain, {0, 0, 0});
    CHECK(uni.rows[0].stop_reason == StopReason::evaluation_failure);
    CHECK_FALSE(uni.rows[0].message.empty());
    const auto gen = sweep_radius(m, {14.0 / 9}, Algorithm::general, {0, 0, 0});
    CHECK(gen.rows[0].stop_reason == StopReason::converged);
    CHECK((gen.rows[0].gain - Vector::Ones(3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("property: worst-case gain is nondecreasing in the radius") {
    oracle::Rng rng(113);
    std::vector<double> radii;
    for (int k = 0; k <= 20; ++k) radii.push_back(0.1 * k);
    for (int t = 0; t < 20; ++t) {
        const auto m = oracle::random_model(rng, 2 + t % 2, 2, 0.0, t % 2);
        const auto s = sweep_radius(m, radii, Algorithm::general);
        CHECK(s.gain_monotone);
        for (std::size_t k = 1; k < s.rows.size(); ++k)
            CHECK((s.rows[k].gain - s.rows[k - 1].gain).minCoeff() >= -1e-9);
    }
}
