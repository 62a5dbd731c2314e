#pragma once

#include <string>
#include <string_view>

namespace coolmom {

/// %.17g-style rendering; 17 significant digits round-trip any double.
/// NaN prints as "nan".
std::string format_double(double value);

/// Parses a whole token; trailing characters are an error.
double parse_double(std::string_view text);

}  // namespace coolmom
