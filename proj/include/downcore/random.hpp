#pragma once

/// \file
/// SplitMix64 with named splitting. All randomness in property suites flows
/// from one 64-bit seed through split(); the bit stream is identical across
/// platforms because no std distribution is involved.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace downcore {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Independent child stream keyed by a name (FNV-1a mixed with the state).
  SplitMix64 split(std::string_view name) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : name) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    SplitMix64 child(state_ ^ h);
    child.next();
    return SplitMix64(child.next());
  }

  SplitMix64 split(std::uint64_t index) const {
    SplitMix64 child(state_ ^ (index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
    child.next();
    return SplitMix64(child.next());
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  /// Uniform integer in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace downcore
