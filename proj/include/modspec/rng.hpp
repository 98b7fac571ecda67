#pragma once

#include <cstdint>

namespace modspec {

/// SplitMix64 counter-based generator (Steele/Lea/Flood 2014). Chosen over
/// std::mt19937/std::normal_distribution because the output stream is fixed
/// by the standard's absence: every platform produces bit-identical draws.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1); 53 mantissa bits, never exactly 0 or 1.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Stateless mix of a seed with a stream index; derived substreams are
/// independent of the order in which trials execute.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream_index);

/// Standard normal variates via the Marsaglia polar method over SplitMix64.
/// The rejection loop consumes a deterministic number of uniforms per seed.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    double next();

private:
    SplitMix64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace modspec
