#pragma once

#include <cmath>
#include <cstdint>

namespace rmtlab {

// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Tags keep unrelated draws (matrix entries, fresh vectors, trial loops)
// on disjoint substreams under the same seed.
enum class StreamTag : std::uint64_t {
    matrix = 1,
    vector = 2,
    phi_mu = 3,
    zeroed_out = 4,
    trial = 5,
    levy = 6,
    level_set = 7,
    scan = 8,
    misc = 9,
};

// Counter-based substream keyed by (seed, tag, i, j). Stateless apart from
// the draw counter, so samples are a pure function of the key and the draw
// index: sampling order across threads never changes the values.
class SubstreamRng {
public:
    SubstreamRng(std::uint64_t seed, StreamTag tag, std::uint64_t i, std::uint64_t j)
        : key_(derive(seed, static_cast<std::uint64_t>(tag), i, j)), ctr_(0) {}

    std::uint64_t next_u64() { return mix64(key_ + kGolden * ++ctr_); }

    // uniform on (0, 1]; never returns 0 so log() is safe
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // standard normal via Box-Muller (one value per call)
    double next_gaussian() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag,
                                std::uint64_t i, std::uint64_t j) {
        std::uint64_t s = mix64(seed + kGolden);
        s = mix64(s ^ (tag + kGolden));
        s = mix64(s ^ (i + kGolden));
        s = mix64(s ^ (j + kGolden));
        return s;
    }

    std::uint64_t key_;
    std::uint64_t ctr_;
};

// Per-trial seed derivation for Monte Carlo loops.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return mix64(mix64(seed + kGolden) ^ (trial + kGolden));
}

} // namespace rmtlab
