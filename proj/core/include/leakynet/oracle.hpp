#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leakynet/model.hpp"
#include "leakynet/potential_list.hpp"

namespace leakynet {

/// Exact reference chain for n in {2, 3}.
///
/// States are lists with entries at most cap, identified up to relabelling of
/// neurons (the law of the trapping time only depends on the sorted list), and
/// stored as ascending vectors in lexicographic order; index 0 is the null
/// list. Spikes that would push a potential past cap clamp it at cap.
struct OracleModel {
    struct Transition {
        std::size_t from = 0;
        std::size_t to = 0;
        double rate = 0.0;
    };

    ModelSpec spec;
    int cap = 0;
    std::vector<std::vector<Potential>> states;
    std::vector<Transition> transitions;  // off-diagonal, merged, sorted by (from, to)
    std::vector<double> exit_rates;       // minus the diagonal of the generator

    std::size_t size() const { return states.size(); }
    static constexpr std::size_t absorbing = 0;

    /// Index of the class of u; throws std::out_of_range when u has an entry
    /// above cap or the wrong size.
    std::size_t index_of(const PotentialList& u) const;
    std::size_t index_of(std::span<const Potential> u) const;

    /// Row sums of the generator, for the conservation check.
    std::vector<double> row_sums() const;

private:
    friend OracleModel build_oracle(const ModelSpec& spec, int cap);
    std::map<std::vector<Potential>, std::size_t> lookup_;
};

/// Throws std::invalid_argument when spec.n is not 2 or 3 or cap < n.
OracleModel build_oracle(const ModelSpec& spec, int cap);

/// Expected trapping time from every state (0 for the null list).
std::vector<double> mean_absorption(const OracleModel& model);
double mean_absorption(const OracleModel& model, const PotentialList& u0);

/// P(tau > t) from u0 by uniformization, absolute error at most 1e-10.
double survival(const OracleModel& model, const PotentialList& u0, double t);
/// Same for ascending times, sharing one propagation.
std::vector<double> survival(const OracleModel& model, const PotentialList& u0, std::span<const double> times);

/// Integral of the survival function over [0, inf) by composite
/// Gauss-Legendre quadrature; equals the mean trapping time.
double survival_integral(const OracleModel& model, const PotentialList& u0);

/// The time c with P(tau > c) = level, found by bisection.
double survival_quantile(const OracleModel& model, const PotentialList& u0, double level);

/// Hand recursion for the mean trapping time of two neurons from (0, k).
double closed_form_n2(const ModelSpec& spec, int k);

struct OracleReport {
    ModelSpec spec;
    int cap = 0;
    std::vector<std::pair<std::string, double>> means;  // state label -> mean, lexicographic
    bool cap_converged = false;
    double cap_relative_change = 0.0;
    std::optional<bool> closed_form_agree;  // n = 2 only
};

/// Means at cap, the cap-doubling check (relative change below 1e-8 between
/// cap and 2 cap at every state whose entries are at most cap / 2), and for n = 2 the comparison
/// with closed_form_n2 (1e-10 relative, k up to min(cap, 15)).
OracleReport oracle_report(const ModelSpec& spec, int cap);

}  // namespace leakynet
