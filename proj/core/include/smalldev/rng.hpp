#pragma once

#include <array>
#include <cstdint>
#include <cmath>

// Counter-based random streams (Philox4x32-10). A draw is a pure function of
// (seed, stream, counter), so simulation results do not depend on worker
// count or scheduling. Convention used by the samplers: stream = sample
// index, counter = within-sample draw index (term, level, or tree edge).

namespace smalldev {

struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
      std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
      std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
      std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }
};

/// One 128-bit Philox block addressed by (seed, stream, counter).
inline std::array<std::uint32_t, 4> rng_block(std::uint64_t seed,
                                              std::uint64_t stream,
                                              std::uint64_t counter) {
  std::array<std::uint32_t, 4> ctr = {
      std::uint32_t(counter), std::uint32_t(counter >> 32),
      std::uint32_t(stream), std::uint32_t(stream >> 32)};
  std::array<std::uint32_t, 2> key = {std::uint32_t(seed),
                                      std::uint32_t(seed >> 32)};
  return Philox4x32::block(ctr, key);
}

inline double u64_to_open01(std::uint64_t x) {
  // 53 significant bits, offset by half an ulp: result lies in (0,1).
  return (double(x >> 11) + 0.5) * 0x1.0p-53;
}

struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Two independent uniforms in (0,1) from one counter.
  std::array<double, 2> uniform2(std::uint64_t counter) const {
    auto b = rng_block(seed, stream, counter);
    std::uint64_t x = (std::uint64_t(b[1]) << 32) | b[0];
    std::uint64_t y = (std::uint64_t(b[3]) << 32) | b[2];
    return {u64_to_open01(x), u64_to_open01(y)};
  }

  double uniform(std::uint64_t counter) const { return uniform2(counter)[0]; }

  /// Standard normal via Box-Muller; consumes exactly one counter.
  double gaussian(std::uint64_t counter) const {
    auto u = uniform2(counter);
    return std::sqrt(-2.0 * std::log(u[0])) *
           std::cos(2.0 * 3.14159265358979323846 * u[1]);
  }

  double exponential(std::uint64_t counter) const {
    return -std::log(uniform(counter));
  }
};

}  // namespace smalldev
