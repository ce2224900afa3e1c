#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace dime {

// splitmix64 finalizer; the bit mixer behind the stream-splitting rule.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Splitting rule: stream k of root seed s is seeded with mix64(s + (k+1)*golden).
// Streams are therefore independent of the order in which they are consumed.
inline std::uint64_t stream_seed(std::uint64_t root, std::uint64_t stream) {
  return mix64(root + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

// Seeded random stream with a fully specified normal sampler (mt19937_64 plus
// an explicit Box-Muller transform), so draws are reproducible across stdlibs.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  static RandomStream for_stream(std::uint64_t root, std::uint64_t stream) {
    return RandomStream(stream_seed(root, stream));
  }

  // uniform on (0, 1]
  double uniform01() { return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  std::uint64_t next_u64() { return gen_(); }

private:
  std::mt19937_64 gen_;
};

}  // namespace dime
