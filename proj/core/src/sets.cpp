#include "leakynet/sets.hpp"

#include <algorithm>
#include <vector>

namespace leakynet {

std::string_view to_string(SetKind kind) {
    switch (kind) {
    case SetKind::s0:
        return "S0";
    case SetKind::s1:
        return "S1";
    case SetKind::s2:
        return "S2";
    case SetKind::s3:
        return "S3";
    case SetKind::w:
        return "W";
    case SetKind::l:
        return "L";
    }
    return "?";
}

std::optional<SetKind> parse_set_kind(std::string_view text) {
    for (SetKind kind : all_set_kinds) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    return std::nullopt;
}

bool SetFlags::contains(SetKind kind) const {
    switch (kind) {
    case SetKind::s0:
        return in_s0;
    case SetKind::s1:
        return in_s1;
    case SetKind::s2:
        return in_s2;
    case SetKind::s3:
        return in_s3;
    case SetKind::w:
        return in_w;
    case SetKind::l:
        return in_l;
    }
    return false;
}

std::size_t floor_sqrt(std::size_t n) {
    std::size_t r = 0;
    while ((r + 1) * (r + 1) <= n) {
        ++r;
    }
    return r;
}

std::size_t ceil_sqrt(std::size_t n) {
    std::size_t r = floor_sqrt(n);
    return r * r == n ? r : r + 1;
}

SetFlags classify_sorted(std::span<const Potential> v) {
    const std::size_t n = v.size();
    SetFlags f;

    std::size_t zeros = 0;
    while (zeros < n && v[zeros] == 0) {
        ++zeros;
    }
    const std::size_t positives = n - zeros;
    f.is_null = positives == 0;

    f.in_s0 = positives >= floor_sqrt(n);
    // #zeros <= sqrt(N)  <=>  #zeros^2 <= N
    f.in_s1 = !f.is_null && zeros * zeros <= n;

    std::size_t distinct_positive = 0;
    for (std::size_t j = zeros; j < n; ++j) {
        if (j == zeros || v[j] != v[j - 1]) {
            ++distinct_positive;
        }
    }
    f.in_s2 = distinct_positive >= ceil_sqrt(n);

    f.in_s3 = true;
    for (std::size_t j = 0; j < n; ++j) {
        if (v[j] < static_cast<Potential>(j)) {
            f.in_s3 = false;
            break;
        }
    }

    bool distinct = true;
    for (std::size_t j = 1; j < n; ++j) {
        if (v[j] == v[j - 1]) {
            distinct = false;
            break;
        }
    }
    // Distinct sorted integers starting at 0 contain {1..k} iff v[k] == k.
    const std::size_t k = n - floor_sqrt(n);
    f.in_w = distinct && v[k] == static_cast<Potential>(k);
    f.in_l = distinct && v[n - 1] == static_cast<Potential>(n - 1);
    return f;
}

SetFlags classify(std::span<const Potential> u) {
    std::vector<Potential> sorted(u.begin(), u.end());
    std::sort(sorted.begin(), sorted.end());
    return classify_sorted(sorted);
}

SetFlags classify(const PotentialList& u) { return classify(u.values()); }

bool in_set(std::span<const Potential> u, SetKind kind) { return classify(u).contains(kind); }

}  // namespace leakynet
