#include <cmath>

#include "coolmom/errors.hpp"
#include "coolmom/types.hpp"

namespace coolmom {

bool all_finite(std::span<const double> v) {
    for (double e : v) {
        if (!std::isfinite(e)) return false;
    }
    return true;
}

void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidInput(message);
}

void require_same_shape(std::size_t expected, std::size_t actual, const char* what) {
    if (expected != actual) {
        throw InvalidInput(std::string(what) + ": expected size " + std::to_string(expected) +
                           ", got " + std::to_string(actual));
    }
}

}  // namespace coolmom
