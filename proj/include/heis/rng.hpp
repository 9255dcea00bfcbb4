#pragma once

#include <cstdint>

namespace heis {

// Counter-based generator: the stream for sample i is a pure function of
// (seed, i), so parallel consumers produce identical results regardless of
// scheduling.
class SampleRng {
public:
    SampleRng(std::uint64_t seed, std::uint64_t index)
        : state_(mix(seed + 0x9E3779B97F4A7C15ull * (index + 1))) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace heis
