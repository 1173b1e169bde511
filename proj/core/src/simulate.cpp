#include "rmdp/simulate.hpp"

#include <stdexcept>

namespace rmdp {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double simulate_average_cost(const McmModel& m, const Policy& g, const Kernel& kernel,
                             long long horizon, std::uint64_t seed, int initial) {
    check_policy(m, g);
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    if (initial < 0 || initial >= m.n_states())
        throw std::invalid_argument("initial state out of range");

    const int n = m.n_states();
    const Matrix P = restrict(kernel, g);
    const Vector f = restrict_cost(m, g);
    SplitMix64 rng(seed);

    double total = 0.0;
    int x = initial;
    for (long long k = 0; k < horizon; ++k) {
        total += f(x);
        const double u = rng.uniform();
        double acc = 0.0;
        int next = -1;
        for (int z = 0; z < n; ++z) {
            if (P(x, z) <= 0.0) continue;
            acc += P(x, z);
            next = z;
            if (u < acc) break;
        }
        x = next;
    }
    return total / static_cast<double>(horizon);
}

}  // namespace rmdp
