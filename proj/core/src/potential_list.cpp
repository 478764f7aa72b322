#include "leakynet/potential_list.hpp"

#include <algorithm>
#include <stdexcept>

namespace leakynet {

std::string validate_potentials(std::span<const Potential> values) {
    if (values.size() < 2) {
        return "potential list needs at least 2 neurons";
    }
    Potential lowest = values.front();
    for (Potential v : values) {
        if (v < 0) {
            return "potentials must be non-negative";
        }
        lowest = std::min(lowest, v);
    }
    if (lowest != 0) {
        return "minimum potential must be 0 (min-zero invariant)";
    }
    return {};
}

PotentialList::PotentialList(std::vector<Potential> values) : values_(std::move(values)) {
    if (auto reason = validate_potentials(values_); !reason.empty()) {
        throw std::invalid_argument(reason);
    }
}

PotentialList PotentialList::null(std::size_t n) {
    return PotentialList(std::vector<Potential>(n, 0));
}

Potential PotentialList::max() const {
    return *std::max_element(values_.begin(), values_.end());
}

std::size_t PotentialList::positive_count() const {
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](Potential v) { return v > 0; }));
}

std::vector<Potential> PotentialList::sorted() const {
    std::vector<Potential> out = values_;
    std::sort(out.begin(), out.end());
    return out;
}

std::string PotentialList::to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i != 0) {
            out += ',';
        }
        out += std::to_string(values_[i]);
    }
    out += ')';
    return out;
}

}  // namespace leakynet
