#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace leakynet {

/// How a leak event changes the potential of the leaking neuron.
enum class LeakKind {
    reset,      ///< potential drops to 0
    decrement,  ///< potential drops by one unit (floor 0)
};

std::string_view to_string(LeakKind kind);

/// Parses "reset" or "decrement"; throws std::invalid_argument otherwise.
LeakKind parse_leak_kind(std::string_view text);

/// Network size, leak mechanism and the base of the exponential spike rate.
///
/// A neuron with potential u > 0 spikes at rate base^u; every neuron with
/// positive potential leaks at rate 1.
struct ModelSpec {
    int n = 2;
    LeakKind leak = LeakKind::reset;
    double base = std::numbers::e;

    /// Throws std::invalid_argument when n < 2 or base <= 1 (or not finite).
    void validate() const;

    double log_base() const { return std::log(base); }
};

}  // namespace leakynet
