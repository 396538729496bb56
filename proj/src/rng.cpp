#include "semuq/rng.hpp"

#include "semuq/errors.hpp"

#include <cmath>
#include <numbers>

namespace semuq {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t mix(uint64_t a, uint64_t b) {
    uint64_t state = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    uint64_t out = splitmix64(state);
    out ^= splitmix64(state);
    return out;
}

}  // namespace

uint64_t derive_seed(uint64_t base, std::string_view label) {
    return mix(base, fnv1a64(label));
}

uint64_t derive_seed(uint64_t base, uint64_t index) {
    return mix(base, 0x6a09e667f3bcc909ULL ^ index);
}

double RngStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

uint32_t RngStream::uniform_index(uint32_t n) {
    if (n == 0) throw InvalidArgument("uniform_index: n must be positive");
    // Fixed-point multiply; bias is < 2^-32 and deterministic.
    return static_cast<uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

}  // namespace semuq
