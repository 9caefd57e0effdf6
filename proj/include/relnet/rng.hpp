#pragma once
#include <cstdint>

namespace relnet {

// Counter-based splittable generator. Every stream is derived by mixing a
// root seed with a stream index, so draw k is identical no matter how the
// work is partitioned across threads.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    // golden-ratio mix of (seed, index)
    std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    SplitMix64 g(s);
    g.next();  // decorrelate adjacent stream indices
    return g;
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace relnet
