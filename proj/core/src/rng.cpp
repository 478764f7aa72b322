#include "leakynet/rng.hpp"

#include <cmath>

namespace leakynet {

namespace {
__extension__ typedef unsigned __int128 uint128;
}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t replica_index)
    : master_seed_(master_seed),
      replica_index_(replica_index),
      engine_(mix64(master_seed ^ mix64(replica_index + 1))) {}

double RngStream::exponential() {
    // Uniform on (0, 1] so the log is finite.
    return -std::log(static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53);
}

std::uint64_t RngStream::below(std::uint64_t bound) {
    // Lemire-style rejection keeps the draw unbiased.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t x = engine_();
        const uint128 m = static_cast<uint128>(x) * bound;
        if (static_cast<std::uint64_t>(m) >= threshold) {
            return static_cast<std::uint64_t>(m >> 64);
        }
    }
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t replica_index) {
    return RngStream(master_seed, replica_index);
}

}  // namespace leakynet
