#include "leakynet/event_log.hpp"

#include <ostream>
#include <sstream>

#include "leakynet/format.hpp"

namespace leakynet {

void write_event_log(std::ostream& out, std::span<const EventRecord> events) {
    out << event_log_header << '\n';
    for (const auto& e : events) {
        out << e.index << ',' << format_real(e.time) << ',' << (e.neuron + 1) << ',' << to_string(e.kind)
            << '\n';
    }
}

std::string event_log_csv(std::span<const EventRecord> events) {
    std::ostringstream out;
    write_event_log(out, events);
    return out.str();
}

}  // namespace leakynet
