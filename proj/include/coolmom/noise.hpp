#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace coolmom {

// Seeded Gaussian stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. Uniforms take the top 53 bits of one engine word; each Gaussian
// variate consumes exactly two words through the cosine branch of the
// Box-Muller transform. No std::*_distribution is used, so a given
// (seed, position) produces the same variate on every conforming platform.
// Two sources built from the same seed replay identical streams, which is
// what the integrator equivalence checks rely on.
class NoiseSource {
public:
    explicit NoiseSource(std::uint64_t seed = 0) : engine_(seed), seed_(seed) {}

    /// Standard normal variate.
    double gaussian();

    void fill_gaussian(std::span<double> out);

    /// Uniform in [0, 1).
    double uniform();

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);

    void reseed(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    /// Number of 64-bit engine words consumed since seeding.
    std::uint64_t position() const noexcept { return position_; }

private:
    std::uint64_t next_word();

    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::uint64_t position_ = 0;
};

/// Independent child seed for a named sub-stream (splitmix64 finalizer
/// applied to seed + stream). Used to keep e.g. weight initialization and
/// minibatch shuffling of one run on unrelated streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace coolmom
