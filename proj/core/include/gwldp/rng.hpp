#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gwldp {

// Deterministic seedable random stream. Every random draw in the library
// flows through this type, and the draw path avoids distribution objects
// whose output is implementation-defined, so one seed reproduces one byte
// stream on any platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  static constexpr const char* algorithm() { return "mt19937_64"; }

  // Uniform double in [0, 1) with 53 random bits.
  double next_uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Inverse-CDF draw: smallest index with cdf[i] > u. The final entry is
  // treated as the total mass, so the draw never falls off the end.
  std::size_t next_index(const std::vector<double>& cdf) {
    double u = next_uniform() * cdf.back();
    std::size_t lo = 0;
    std::size_t hi = cdf.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cdf[mid] > u) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  }

  // Derives an independent stream for a labeled subtask; used to give each
  // experiment row its own reproducible stream regardless of row order.
  RandomSource fork(std::uint64_t label) const {
    std::uint64_t x = seed_ ^ (0x9e3779b97f4a7c15ULL + label * 0xbf58476d1ce4e5b9ULL);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return RandomSource(x);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace gwldp
