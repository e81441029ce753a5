#pragma once
// Counter-based pseudorandom generator for reproducible Monte Carlo runs.
//
// The generator is a SplitMix64 counter hash: output i of stream s under
// seed k is a pure function of (k, s, i).  Realizations seeded as
// (seed, realization_index) therefore produce the same draws whether the
// realizations are evaluated serially or in any other order.

#include <cstdint>
#include <cmath>

namespace tpi {

namespace detail {
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
}  // namespace detail

class CounterRng {
public:
    explicit CounterRng(uint64_t seed, uint64_t stream = 0)
        : key_(detail::mix64(seed + 0x9E3779B97F4A7C15ull * (stream + 1))) {}

    uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ull;
        return detail::mix64(key_ ^ counter_);
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in (0, 1], safe as a log() argument
    double uniform_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Box-Muller pair of independent standard normals
    void normal_pair(double& g1, double& g2) {
        const double r = std::sqrt(-2.0 * std::log(uniform_open()));
        const double phi = 6.283185307179586476925286766559 * uniform();
        g1 = r * std::cos(phi);
        g2 = r * std::sin(phi);
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double g1, g2;
        normal_pair(g1, g2);
        spare_ = g2;
        have_spare_ = true;
        return g1;
    }

    // exponential with unit mean
    double exponential() { return -std::log(uniform_open()); }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace tpi
