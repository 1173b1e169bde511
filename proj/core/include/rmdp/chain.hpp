#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rmdp/linalg.hpp"

namespace rmdp {

struct CommClass {
    std::vector<int> states;  // ascending
    bool recurrent = false;
};

// Classes are ordered by their lowest state index.
struct ClassDecomposition {
    std::vector<CommClass> classes;

    std::vector<const CommClass*> recurrent() const;
    std::vector<int> transient_states() const;
    int class_of(int state) const;
};

class ReducibleError : public std::runtime_error {
public:
    ReducibleError(const std::string& what, ClassDecomposition d)
        : std::runtime_error(what), decomposition(std::move(d)) {}
    ClassDecomposition decomposition;
};

ClassDecomposition communication_classes(const Matrix& P);
bool is_irreducible(const Matrix& P);

// Stationary row q with qP = q and sum(q) = 1. Throws ReducibleError when P
// has more than one communication class.
Vector invariant_distribution(const Matrix& P);

// Stationary distribution of P restricted to a closed class.
Vector class_invariant_distribution(const Matrix& P, const std::vector<int>& cls);

// lim (1/n) sum_{k<n} P^k, assembled from the class structure.
Matrix cesaro_limit(const Matrix& P);
Matrix cesaro_limit(const Matrix& P, const ClassDecomposition& d);

std::string describe_class(const std::vector<int>& cls, const std::vector<std::string>& names);

}  // namespace rmdp
