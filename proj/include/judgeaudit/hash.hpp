#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace judgeaudit {

// 64-bit FNV-1a. Used for prompt digests and for deriving per-call random
// streams; std::hash is not stable across implementations, this is.
constexpr uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(uint64_t value);

// splitmix64 stream. Small, fast, and fully defined by its seed, so results
// are identical regardless of scheduling or platform.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    uint64_t state_;
};

} // namespace judgeaudit
