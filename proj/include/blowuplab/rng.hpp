#pragma once

#include <cmath>
#include <cstdint>

namespace blowuplab {

/// SplitMix64: tiny, fast, and good enough for sampling test points.
/// Fixed algorithm (not an implementation-defined std distribution) so that
/// suites are reproducible bit-for-bit across compilers and platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Log-uniform on [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) {
        const double u = uniform01();
        return std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
    }

    bool coin() { return (next() & 1) != 0; }

private:
    std::uint64_t state_;
};

/// Derives an independent substream seed for one sample. Serial and
/// parallel suite runs draw sample i from substream(seed, i), so reports do
/// not depend on the worker partition.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 h(seed ^ (0x517cc1b727220a95ULL * (index + 1)));
    return h.next();
}

} // namespace blowuplab
