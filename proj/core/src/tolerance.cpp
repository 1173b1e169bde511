#include "rmdp/tolerance.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace rmdp {

namespace {

double from_environment() {
    const char* env = std::getenv("ROBUST_MDP_TOL");
    if (env == nullptr) return kDefaultTol;
    try {
        double v = std::stod(env);
        if (std::isfinite(v) && v > 0.0) return v;
    } catch (...) {
    }
    return kDefaultTol;
}

std::atomic<double>& current() {
    static std::atomic<double> tol{from_environment()};
    return tol;
}

}  // namespace

double tolerance() { return current().load(std::memory_order_relaxed); }

void set_tolerance(double tol) {
    if (!(std::isfinite(tol) && tol > 0.0))
        throw std::invalid_argument("tolerance must be a positive finite number");
    current().store(tol, std::memory_order_relaxed);
}

}  // namespace rmdp
