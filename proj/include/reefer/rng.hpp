#pragma once

#include <cstdint>
#include <random>

namespace reefer {

/// Seeded generator whose draws are identical on every platform.
/// (std::uniform_real_distribution is implementation-defined.)
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(unit() * static_cast<double>(n)); }
    bool coin(double p_true) { return unit() < p_true; }

private:
    std::mt19937_64 engine_;
};

} // namespace reefer
