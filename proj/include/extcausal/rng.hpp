#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace extcausal {

/// splitmix64 finalizer, used to derive decorrelated sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic sub-seed for a labelled stream. Chainable:
/// derive_seed(derive_seed(seed, cell), rep).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
    return splitmix64(seed ^ splitmix64(label));
}

/// mt19937_64 plus hand-rolled samplers. The engine itself is fully specified
/// by the standard; the <random> distributions are not, so sampling works from
/// raw 64-bit draws to keep seeded output identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0,1); never returns 0 or 1 exactly.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
    }

    /// Uniform integer in {0, ..., n-1}, unbiased via rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = max - max % n;
        std::uint64_t draw = engine_();
        while (draw >= limit) draw = engine_();
        return draw % n;
    }

    /// Standard normal via Box-Muller; the sine companion is discarded.
    double gaussian() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    /// Pareto with scale 1 and tail index 1: support [1,inf), P(X > x) = 1/x.
    double pareto1() { return 1.0 / uniform01(); }

    /// Standard Cauchy via the inverse CDF.
    double cauchy() { return std::tan(kPi * (uniform01() - 0.5)); }

private:
    static constexpr double kPi = 3.14159265358979323846;
    std::mt19937_64 engine_;
};

}  // namespace extcausal
