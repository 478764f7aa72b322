#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace leakynet {

/// Membrane potential in dimensionless units.
using Potential = std::int64_t;

/// List of non-negative membrane potentials whose minimum is 0.
///
/// Every instance satisfies the invariants: size >= 2, all entries >= 0,
/// at least one entry equal to 0. Neurons are addressed by 0-based index.
class PotentialList {
public:
    /// Throws std::invalid_argument naming the violated invariant.
    explicit PotentialList(std::vector<Potential> values);
    PotentialList(std::initializer_list<Potential> values)
        : PotentialList(std::vector<Potential>(values)) {}

    /// The all-zero list of n neurons (the trap).
    static PotentialList null(std::size_t n);

    std::size_t size() const { return values_.size(); }
    Potential operator[](std::size_t a) const { return values_[a]; }
    std::span<const Potential> values() const { return values_; }

    Potential max() const;
    std::size_t positive_count() const;
    bool is_null() const { return positive_count() == 0; }

    /// Ascending copy of the potentials (the permutation class of the list).
    std::vector<Potential> sorted() const;

    std::string to_string() const;

    friend bool operator==(const PotentialList&, const PotentialList&) = default;

private:
    std::vector<Potential> values_;
};

/// Checks the list invariants without constructing; returns an empty string
/// when valid, otherwise a one-line reason.
std::string validate_potentials(std::span<const Potential> values);

}  // namespace leakynet
