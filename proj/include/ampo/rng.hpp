#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace ampo {

// Small deterministic generator (splitmix64). Every random draw in a run
// flows from one user seed through named sub-streams, so a single --seed
// reproduces the whole run bit-for-bit on any platform.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();

    // Uniform in [0, n). n must be > 0.
    std::size_t bounded(std::size_t n);

    // Uniform in [0, 1).
    double unit();

private:
    std::uint64_t state_;
};

// Derives the seed for a named sub-stream (e.g. "failures", iteration 3).
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view stream, std::uint64_t index);

// k distinct indices drawn uniformly from [0, n) without replacement,
// in draw order. k is clamped to n.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace ampo
