#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "leakynet/potential_list.hpp"

namespace leakynet {

/// The named subsets of the state space.
///
///  - s0: at least floor(sqrt N) neurons have positive potential
///  - s1: at most sqrt(N) neurons sit at zero
///  - s2: ceil(sqrt N) neurons carry strictly increasing potentials, all >= 1
///  - s3: the j-th smallest potential (0-based j) is at least j
///  - w:  all potentials distinct and {1, ..., N - floor(sqrt N)} all present
///  - l:  the potentials are exactly {0, ..., N-1} (ladder lists)
///
/// Guaranteed nesting: l within w within s3, and w within s1 and s2. The
/// chain s3 within s2 within s1 does not hold for arbitrary lists, e.g.
/// (0,5,5,5,5) is in s3 but not s2.
enum class SetKind { s0, s1, s2, s3, w, l };

inline constexpr std::array<SetKind, 6> all_set_kinds{SetKind::s0, SetKind::s1, SetKind::s2,
                                                      SetKind::s3, SetKind::w,  SetKind::l};

std::string_view to_string(SetKind kind);
std::optional<SetKind> parse_set_kind(std::string_view text);

struct SetFlags {
    bool is_null = false;
    bool in_s0 = false;
    bool in_s1 = false;
    bool in_s2 = false;
    bool in_s3 = false;
    bool in_w = false;
    bool in_l = false;

    bool contains(SetKind kind) const;
    friend bool operator==(const SetFlags&, const SetFlags&) = default;
};

SetFlags classify(const PotentialList& u);
SetFlags classify(std::span<const Potential> u);
/// Same as classify() for a list already sorted ascending.
SetFlags classify_sorted(std::span<const Potential> sorted);

bool in_set(std::span<const Potential> u, SetKind kind);

/// floor(sqrt n) and ceil(sqrt n) computed exactly on integers.
std::size_t floor_sqrt(std::size_t n);
std::size_t ceil_sqrt(std::size_t n);

}  // namespace leakynet
