// Counter-based Gaussian stream: Philox4x32-10 keyed by the run seed,
// counter (path, step, substream).  Every draw is a pure function of its
// indices, so ensembles are reproducible for any worker count or schedule.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace roughldp {

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         std::array<std::uint32_t, 2>& key) {
  constexpr std::uint64_t kM0 = 0xD2511F53ull;
  constexpr std::uint64_t kM1 = 0xCD9E8D57ull;
  const std::uint64_t p0 = kM0 * ctr[0];
  const std::uint64_t p1 = kM1 * ctr[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  key[0] += 0x9E3779B9u;
  key[1] += 0xBB67AE85u;
}

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) philox_round(ctr, key);
  return ctr;
}

}  // namespace detail

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  // Two independent uniforms in (0,1) for the given counter.
  std::array<double, 2> uniform_pair(std::uint64_t path, std::uint64_t step,
                                     std::uint32_t substream) const {
    const auto w = detail::philox4x32(
        {static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
         static_cast<std::uint32_t>(step),
         static_cast<std::uint32_t>(step >> 32) ^ (substream * 0x85EBCA6Bu)},
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    const auto to_unit = [](std::uint32_t hi, std::uint32_t lo) {
      const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
      return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    };
    return {to_unit(w[0], w[1]), to_unit(w[2], w[3])};
  }

  // Standard normal via Box-Muller on the counter's uniform pair.
  double normal(std::uint64_t path, std::uint64_t step,
                std::uint32_t substream) const {
    const auto u = uniform_pair(path, step, substream);
    return std::sqrt(-2.0 * std::log(u[0])) *
           std::cos(2.0 * 3.14159265358979323846 * u[1]);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Substream labels shared across modules.
inline constexpr std::uint32_t kStreamDrivingNoise = 0;  // dB / Cholesky z
inline constexpr std::uint32_t kStreamPriceNoise = 1;    // dW
inline constexpr std::uint32_t kStreamOptimizer = 2;     // multistart draws

}  // namespace roughldp
