#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "leakynet/engine.hpp"

namespace leakynet {

inline constexpr const char* event_log_header = "n,time,neuron,kind";

/// Writes the event log as CSV. Neurons are printed 1-based, times with 17
/// significant digits.
void write_event_log(std::ostream& out, std::span<const EventRecord> events);

std::string event_log_csv(std::span<const EventRecord> events);

}  // namespace leakynet
