#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace cbo {

/// Step index reserved for drawing initial positions, so that initialization
/// never shares a substream with any Euler-Maruyama step.
inline constexpr std::uint64_t kInitStream = std::numeric_limits<std::uint64_t>::max();

/// SplitMix64 stream keyed by (seed, particle, step). Cheap to construct, so
/// every particle gets a fresh, independent stream per step and results do not
/// depend on update order or thread count. Satisfies UniformRandomBitGenerator.
class Substream {
 public:
  using result_type = std::uint64_t;

  Substream(std::uint64_t seed, std::uint64_t particle, std::uint64_t step) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Fills `out` with i.i.d. N(0, variance) draws from the (seed, particle, step) substream.
void gaussian_increment(std::uint64_t seed, std::uint64_t particle, std::uint64_t step, double variance,
                        std::span<double> out);

}  // namespace cbo
