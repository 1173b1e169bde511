#include "rmdp/tv_ball.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rmdp {

std::size_t SupportPartition::size() const {
    std::size_t s = max_set.size() + min_set.size();
    for (const auto& m : middle_sets) s += m.size();
    return s;
}

std::vector<int> SupportPartition::removal_order() const {
    std::vector<int> order = min_set;
    for (const auto& m : middle_sets) order.insert(order.end(), m.begin(), m.end());
    return order;
}

SupportPartition partition_support(const Vector& values, double tol) {
    const int n = static_cast<int>(values.size());
    SupportPartition p;
    if (n == 0) return p;
    p.l_max = values.maxCoeff();
    p.l_min = values.minCoeff();

    if (p.l_max - p.l_min <= tol) {
        p.max_set.resize(n);
        std::iota(p.max_set.begin(), p.max_set.end(), 0);
        p.l_min = p.l_max;
        return p;
    }

    std::vector<int> rest;
    for (int i = 0; i < n; ++i) {
        if (p.l_max - values(i) <= tol)
            p.max_set.push_back(i);
        else if (values(i) - p.l_min <= tol)
            p.min_set.push_back(i);
        else
            rest.push_back(i);
    }
    std::stable_sort(rest.begin(), rest.end(),
                     [&](int a, int b) { return values(a) < values(b); });
    for (std::size_t i = 0; i < rest.size();) {
        const double base = values(rest[i]);
        std::vector<int> level;
        while (i < rest.size() && values(rest[i]) - base <= tol) level.push_back(rest[i++]);
        std::sort(level.begin(), level.end());
        p.middle_sets.push_back(std::move(level));
        p.middle_levels.push_back(base);
    }
    return p;
}

namespace {

void check_inputs(const Vector& nominal, double radius, double tol) {
    if (!(radius >= 0.0 && radius <= 2.0))
        throw std::invalid_argument("radius " + std::to_string(radius) + " is outside [0, 2]");
    for (Eigen::Index i = 0; i < nominal.size(); ++i)
        if (!(nominal(i) >= 0.0) || nominal(i) > 1.0 + tol)
            throw std::invalid_argument("nominal entry " + std::to_string(i) +
                                        " is not a probability");
    if (std::abs(nominal.sum() - 1.0) > tol)
        throw std::invalid_argument("nominal row does not sum to 1");
}

}  // namespace

WaterfillResult waterfill_row(const Vector& nominal, const SupportPartition& part,
                              double radius, double tol) {
    check_inputs(nominal, radius, tol);
    if (part.size() != static_cast<std::size_t>(nominal.size()))
        throw std::invalid_argument("partition and nominal row differ in length");
    std::vector<double> mu(nominal.data(), nominal.data() + nominal.size());
    WaterfillResult r;
    const auto nu = waterfill_allocate(mu, part, radius, &r.used_mass);
    r.distribution = Eigen::Map<const Vector>(nu.data(), static_cast<Eigen::Index>(nu.size()));
    r.partition = part;
    return r;
}

WaterfillResult waterfill_row(const Vector& nominal, const Vector& values, double radius,
                              double tol) {
    if (values.size() != nominal.size())
        throw std::invalid_argument("values and nominal row differ in length");
    return waterfill_row(nominal, partition_support(values, tol), radius, tol);
}

double max_linear_payoff(const Vector& nominal, const Vector& values, double radius,
                         double tol) {
    return waterfill_row(nominal, values, radius, tol).distribution.dot(values);
}

double oscillation_payoff(const Vector& nominal, const Vector& values, double radius) {
    return nominal.dot(values) + 0.5 * radius * (values.maxCoeff() - values.minCoeff());
}

double tv_distance(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().sum(); }

}  // namespace rmdp
