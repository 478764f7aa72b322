#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace leakynet {

/// Shortest round-trip free formatting with 17 significant digits, as used in
/// every CSV and JSON number written by the library.
std::string format_real(double x);

/// Empty string for an absent value.
std::string format_real(const std::optional<double>& x);
std::string format_count(const std::optional<std::uint64_t>& x);

}  // namespace leakynet
