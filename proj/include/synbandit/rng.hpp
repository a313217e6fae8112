#pragma once

// Deterministic random streams.
//
// Seed derivation for substream `name` of repeat `r` under master seed `m`:
//
//   h    = FNV-1a-64(name)
//   seed = mix(mix(mix(m) ^ r) ^ h)
//
// where mix is the splitmix64 finalizer applied after adding the golden gamma
// 0x9E3779B97F4A7C15. The stream itself is splitmix64 over that seed.
// Uniform doubles use the top 53 bits; normals use Box-Muller (two uniforms,
// no caching); gamma variates use Marsaglia-Tsang. None of this depends on
// the standard library's distribution implementations, so a given
// (master, repeat, name) yields the same numbers on every platform.

#include <cstdint>
#include <string_view>

namespace synbandit {

std::uint64_t fnv1a64(std::string_view text) noexcept;
std::uint64_t splitmix_mix(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t repeat,
                          std::string_view name) noexcept;

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0) noexcept : state_(seed) {}
    RandomStream(std::uint64_t master, std::uint64_t repeat, std::string_view name) noexcept
        : state_(derive_seed(master, repeat, name)) {}

    std::uint64_t next_u64() noexcept;
    // Uniform on [0, 1).
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double normal() noexcept;
    double normal(double mean, double sd) noexcept { return mean + sd * normal(); }
    double gamma(double shape) noexcept;
    double beta(double a, double b) noexcept;
    bool bernoulli(double p) noexcept { return uniform() < p; }
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) noexcept;

    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace synbandit
