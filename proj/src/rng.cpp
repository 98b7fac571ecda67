#include "modspec/rng.hpp"

#include <cmath>

namespace modspec {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream_index) {
    // One SplitMix64 scramble of the index, xored into the seed, then a
    // second scramble. Distinct (seed, index) pairs land in distinct streams.
    SplitMix64 mixer(seed ^ (stream_index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    return mixer.next_u64();
}

double GaussianStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * gen_.next_unit() - 1.0;
        v = 2.0 * gen_.next_unit() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

}  // namespace modspec
