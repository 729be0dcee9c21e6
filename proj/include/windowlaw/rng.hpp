#pragma once

#include <cstdint>

namespace windowlaw {

/// Counter-based generator: draw i of a stream is mix64(key + (i+1) * GAMMA),
/// the splitmix64 finalizer over a Weyl sequence. Any draw is addressable by
/// index, so streams can be resumed or sampled sparsely.
///
/// Stream derivation (stable across versions, part of the on-disk contract):
///   key(seed, replicate) = mix64(mix64(seed) + (replicate + 1) * GAMMA)
class CounterRng {
  public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replicate) {
        return mix64(mix64(seed) + (replicate + 1) * kGamma);
    }

    explicit CounterRng(std::uint64_t key) : key_(key) {}
    CounterRng(std::uint64_t seed, std::uint64_t replicate)
        : key_(stream_key(seed, replicate)) {}

    std::uint64_t bits(std::uint64_t i) const { return mix64(key_ + (i + 1) * kGamma); }

    /// Uniform on (0,1), strictly inside the open interval.
    double uniform01(std::uint64_t i) const {
        return (static_cast<double>(bits(i) >> 11) + 0.5) * 0x1p-53;
    }

    std::uint64_t key() const { return key_; }

  private:
    std::uint64_t key_;
};

/// Inverse of the standard normal CDF (Wichura's AS241, double precision).
double normal_quantile(double p);

} // namespace windowlaw
