#pragma once

#include <cstdint>
#include <random>

namespace clf {

/// Seeded uniform doubles with a fixed, library-independent mapping from the
/// 64-bit engine output (std::uniform_real_distribution is not portable).
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double next() { return double(engine_() >> 11) * 0x1.0p-53; }
    double next(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

} // namespace clf
