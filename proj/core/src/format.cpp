#include "leakynet/format.hpp"

#include <charconv>
#include <cmath>

namespace leakynet {

std::string format_real(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, end);
}

std::string format_real(const std::optional<double>& x) { return x ? format_real(*x) : std::string(); }

std::string format_count(const std::optional<std::uint64_t>& x) {
    return x ? std::to_string(*x) : std::string();
}

}  // namespace leakynet
