#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace hubness {

/// Seeded random source with a bitstream fixed by this library, independent of the
/// standard library's distribution implementations. Only the engine (mt19937_64,
/// whose output sequence is specified by the standard) is borrowed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream keyed by (seed, key); used for per-dimension or per-task streams
    /// so results do not depend on processing order.
    static Rng substream(std::uint64_t seed, std::uint64_t key);

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n), unbiased.
    std::uint64_t below(std::uint64_t n);
    /// Standard normal via the Marsaglia polar method.
    double normal();
    /// Gamma(shape, 1) via Marsaglia-Tsang.
    double gamma(double shape);
    double chi_square(double dof) { return 2.0 * gamma(0.5 * dof); }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

/// SplitMix64 finalizer, used to derive stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key);

} // namespace hubness
