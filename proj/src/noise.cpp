#include "coolmom/noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "coolmom/errors.hpp"

namespace coolmom {

std::uint64_t NoiseSource::next_word() {
    ++position_;
    return engine_();
}

double NoiseSource::uniform() {
    return static_cast<double>(next_word() >> 11) * 0x1.0p-53;
}

double NoiseSource::gaussian() {
    // u1 in (0, 1] keeps the logarithm finite.
    const double u1 = static_cast<double>((next_word() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void NoiseSource::fill_gaussian(std::span<double> out) {
    for (double& e : out) e = gaussian();
}

std::uint64_t NoiseSource::uniform_index(std::uint64_t n) {
    require(n > 0, "uniform_index: n must be positive");
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = kMax - kMax % n;
    std::uint64_t w;
    do {
        w = next_word();
    } while (w >= limit);
    return w % n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void NoiseSource::reseed(std::uint64_t seed) {
    engine_.seed(seed);
    seed_ = seed;
    position_ = 0;
}

}  // namespace coolmom
