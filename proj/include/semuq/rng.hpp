#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace semuq {

// All randomness in the toolkit flows from one master seed through named
// substreams, so results are reproducible bit-for-bit and independent of
// evaluation order across components.

uint64_t splitmix64(uint64_t& state);

/// Child seed for a named substream ("dataset", "train/shuffle", ...).
uint64_t derive_seed(uint64_t base, std::string_view label);

/// Child seed for an indexed substream (per-sample, per-trial, per-epoch).
uint64_t derive_seed(uint64_t base, uint64_t index);

/// Deterministic random stream. Distribution transforms are implemented
/// here rather than with std::*_distribution so sequences are identical
/// across standard libraries.
class RngStream {
public:
    explicit RngStream(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the paired value is cached.
    double normal();

    /// Uniform index in [0, n). n must be positive.
    uint32_t uniform_index(uint32_t n);

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace semuq
