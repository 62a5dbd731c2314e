#include "coolmom/format.hpp"

#include <charconv>
#include <cmath>

#include "coolmom/errors.hpp"

namespace coolmom {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, end);
}

double parse_double(std::string_view text) {
    if (text == "nan") return std::nan("");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidInput("not a number: '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace coolmom
