#pragma once

#include <cstdint>
#include <span>

namespace ssc {

// SplitMix64 (Steele, Lea, Flood 2014). Small splittable generator; we use
// it both directly and to derive independent per-stream seeds, so sampling
// results do not depend on how work is partitioned across workers.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Draw an index from a finite distribution given as a span of weights
    // summing to ~1. The final index absorbs any rounding slack.
    int sample(std::span<const double> dist) {
        const double u = next_double();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
            acc += dist[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(dist.size()) - 1;
    }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return next() % n;
    }

    // Independent stream for (seed, index); used for per-path sub-seeds.
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
        return SplitMix64(mixer.next());
    }

private:
    std::uint64_t state_;
};

}  // namespace ssc
