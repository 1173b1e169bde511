#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "rmdp/linalg.hpp"
#include "rmdp/tolerance.hpp"

namespace rmdp {

// Level sets of a value vector: the argmax set, the argmin set and the
// intermediate sets in strictly increasing order of value.
struct SupportPartition {
    std::vector<int> max_set;
    std::vector<int> min_set;
    std::vector<std::vector<int>> middle_sets;
    std::vector<double> middle_levels;
    double l_max = 0.0;
    double l_min = 0.0;

    // A constant vector has every index in max_set and nothing else.
    bool constant() const { return min_set.empty(); }
    std::size_t size() const;
    // Indices in the order mass is drained: min set, then X_1, X_2, ...
    std::vector<int> removal_order() const;

    bool operator==(const SupportPartition& o) const {
        return max_set == o.max_set && min_set == o.min_set && middle_sets == o.middle_sets;
    }
};

// Values within tol of each other share a level.
SupportPartition partition_support(const Vector& values, double tol = tolerance());

// Mass moved onto the first element of the max set and drained from the
// bottom levels. Works for any ordered field (double, exact rationals).
template <class T>
std::vector<T> waterfill_allocate(const std::vector<T>& mu, const SupportPartition& part,
                                  const T& radius, T* used_mass = nullptr) {
    std::vector<T> nu = mu;
    const T zero(0), one(1), two(2);
    if (part.constant()) {
        if (used_mass) *used_mass = zero;
        return nu;
    }
    T top = zero;
    for (int i : part.max_set) top += mu[i];
    T alpha = two * (one - top);
    if (radius < alpha) alpha = radius;
    if (alpha < zero) alpha = zero;
    if (used_mass) *used_mass = alpha;

    const T half = alpha / two;
    nu[part.max_set.front()] += half;
    T left = half;
    for (int i : part.removal_order()) {
        if (!(zero < left)) break;
        const T take = nu[i] < left ? nu[i] : left;
        nu[i] -= take;
        left -= take;
    }
    return nu;
}

struct WaterfillResult {
    Vector distribution;
    double used_mass = 0.0;
    SupportPartition partition;
};

// Throws std::invalid_argument for a radius outside [0, 2] or a nominal row
// that is not a probability vector.
WaterfillResult waterfill_row(const Vector& nominal, const Vector& values, double radius,
                              double tol = tolerance());
WaterfillResult waterfill_row(const Vector& nominal, const SupportPartition& part,
                              double radius, double tol = tolerance());

double max_linear_payoff(const Vector& nominal, const Vector& values, double radius,
                         double tol = tolerance());

// mu.values + (R/2)(max - min)
double oscillation_payoff(const Vector& nominal, const Vector& values, double radius);

double tv_distance(const Vector& a, const Vector& b);

}  // namespace rmdp
