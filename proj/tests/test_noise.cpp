#include <cmath>
#include <set>

#include "coolmom/noise.hpp"
#include "doctest.h"

using namespace coolmom;

TEST_CASE("equal seeds replay identical streams") {
    NoiseSource a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double va = a.gaussian();
        CHECK(va == b.gaussian());
        differs |= va != c.gaussian();
    }
    CHECK(differs);
    CHECK(a.position() == 2000);
}

TEST_CASE("reseed restarts the stream") {
    NoiseSource a(7);
    const double first = a.gaussian();
    a.gaussian();
    a.reseed(7);
    CHECK(a.position() == 0);
    CHECK(a.gaussian() == first);
}

TEST_CASE("gaussian moments") {
    NoiseSource noise(2024);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = noise.gaussian();
        sum += g;
        sum2 += g * g;
        sum4 += g * g * g * g;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(sum4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("uniform draws stay in range") {
    NoiseSource noise(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = noise.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(noise.uniform_index(7) < 7);
    }
    CHECK_THROWS(noise.uniform_index(0));
}

TEST_CASE("uniform_index covers every bucket") {
    NoiseSource noise(5);
    int counts[5] = {};
    for (int i = 0; i < 50000; ++i) ++counts[noise.uniform_index(5)];
    for (int c : counts) CHECK(c == doctest::Approx(10000).epsilon(0.05));
}

TEST_CASE("derived seeds are distinct") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 50; ++s) {
        for (std::uint64_t stream = 0; stream < 4; ++stream) seen.insert(derive_seed(s, stream));
    }
    CHECK(seen.size() == 200);
}
