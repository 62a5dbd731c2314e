#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace coolmom {

/// Dense parameter / coordinate vector. All arithmetic is 64-bit.
using Vector = std::vector<double>;

inline double squared_norm(std::span<const double> v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return s;
}

bool all_finite(std::span<const double> v);

}  // namespace coolmom
