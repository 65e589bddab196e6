#pragma once

#include <boost/random/normal_distribution.hpp>

#include <cstdint>
#include <random>

namespace sstuq {

/// Seedable generator used everywhere. mt19937_64's output sequence is fixed by the
/// C++ standard and Boost's normal sampler is a portable ziggurat, so streams are
/// identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform() { return std::generate_canonical<double, 53>(engine_); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

/// Stream for bootstrap replicate m (1-based) of a run seeded with `seed`. seed_seq mixing
/// (fully specified by the standard) keeps the streams of nearby run seeds unrelated.
inline std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t m) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(m >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace sstuq
