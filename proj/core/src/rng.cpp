#include "cbo/rng.hpp"

#include <cmath>

namespace cbo {

Substream::Substream(std::uint64_t seed, std::uint64_t particle, std::uint64_t step) noexcept
    : state_(mix(mix(mix(seed) ^ particle) ^ (step * 0xd6e8feb86659fd93ULL))) {}

void gaussian_increment(std::uint64_t seed, std::uint64_t particle, std::uint64_t step, double variance,
                        std::span<double> out) {
  Substream stream(seed, particle, step);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  for (double& x : out) x = normal(stream);
}

}  // namespace cbo
