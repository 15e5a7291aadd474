#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace noderank {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the named sub-stream `name`/`index` of a master seed, e.g.
/// derive_seed(seed, "sir/trial", 17). Stable across platforms.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name, std::uint64_t index = 0) noexcept;

/// mt19937_64 with platform-independent real and bounded-integer draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace noderank
