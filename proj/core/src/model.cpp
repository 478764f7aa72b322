#include "leakynet/model.hpp"

#include <stdexcept>

namespace leakynet {

std::string_view to_string(LeakKind kind) {
    switch (kind) {
    case LeakKind::reset:
        return "reset";
    case LeakKind::decrement:
        return "decrement";
    }
    return "unknown";
}

LeakKind parse_leak_kind(std::string_view text) {
    if (text == "reset") {
        return LeakKind::reset;
    }
    if (text == "decrement") {
        return LeakKind::decrement;
    }
    throw std::invalid_argument("unknown leak kind '" + std::string(text) +
                                "' (expected reset or decrement)");
}

void ModelSpec::validate() const {
    if (n < 2) {
        throw std::invalid_argument("model: neuron count must be >= 2, got " + std::to_string(n));
    }
    if (!std::isfinite(base) || base <= 1.0) {
        throw std::invalid_argument("model: rate base must be finite and > 1");
    }
}

}  // namespace leakynet
