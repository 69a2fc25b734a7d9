#pragma once

#include <cstdint>
#include <random>

namespace quasibasis {

// Seeded uniform generator. Converts raw 64-bit draws to doubles directly so
// sequences are identical across standard library implementations.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double next(double lo, double hi) { return lo + (hi - lo) * next(); }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace quasibasis
