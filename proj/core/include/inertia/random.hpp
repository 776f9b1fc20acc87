#pragma once

#include <cstdint>
#include <random>

namespace inertia {

/// Seeded generator with a fully specified output sequence: 64-bit Mersenne
/// Twister for bits, 53-bit open-interval uniforms, inverse-CDF normals.
/// Unlike std::normal_distribution the draws are identical on every
/// standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1).
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal.
    double normal();

    /// Laplace with unit scale (variance 2).
    double laplace();

private:
    std::mt19937_64 engine_;
};

}  // namespace inertia
