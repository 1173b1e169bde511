#pragma once

#include <cstdint>

#include "rmdp/model.hpp"

namespace rmdp {

// SplitMix64 (Steele, Lea and Flood, 2014): 64-bit state, increment
// 0x9e3779b97f4a7c15, output mix with constants 0xbf58476d1ce4e5b9 and
// 0x94d049bb133111eb. Uniform doubles take the top 53 bits.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform();  // in [0, 1)

private:
    std::uint64_t state_;
};

// Empirical mean of f(x_k, g(x_k)) over `horizon` steps of restrict(kernel, g)
// started at `initial`. The next state is drawn by inverse CDF over the
// declared state order.
double simulate_average_cost(const McmModel& model, const Policy& g, const Kernel& kernel,
                             long long horizon, std::uint64_t seed, int initial);

}  // namespace rmdp
