#pragma once

#include <cstdint>
#include <random>

namespace leakynet {

/// SplitMix64 finalizer; a 64-bit avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-replica random stream.
///
/// Replica i of a run with master seed s draws from mt19937_64 seeded with
/// mix64(s ^ mix64(i + 1)), so streams depend only on (s, i) and never on
/// scheduling.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t replica_index);

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t replica_index() const { return replica_index_; }

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Unit-mean exponential draw.
    double exponential();

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t master_seed_;
    std::uint64_t replica_index_;
    std::mt19937_64 engine_;
};

/// Documented seed derivation rule embedded in every output file.
inline constexpr const char* seed_derivation_rule =
    "replica i uses mt19937_64 seeded with mix64(seed ^ mix64(i + 1)), mix64 = SplitMix64 finalizer";

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t replica_index);

}  // namespace leakynet
