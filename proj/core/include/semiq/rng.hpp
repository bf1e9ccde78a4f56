#pragma once

#include <cstdint>
#include <random>

namespace semiq {

// Deterministic random stream with explicit splitting.
//
// Streams derived with split() are statistically independent of the parent
// and of each other, so parallel consumers (one substream per sampling cell)
// never share mutable state. The unit-interval output uses the top 53 bits of
// mt19937_64, which makes sequences reproducible across platforms.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : root_(seed) {
    std::uint64_t s = seed;
    gen_.seed(mix(s));
  }

  // Uniform double in [0, 1) with 53-bit resolution.
  double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::uint64_t next_u64() { return gen_(); }

  // Integer uniform in [0, n) via rejection-free scaling (n small here).
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(next_unit() * static_cast<double>(n)) % n;
  }

  // Independent substream identified by stream_id. Calling split with the
  // same id on an unused copy of the parent yields the same substream.
  RandomStream split(std::uint64_t stream_id) const {
    std::uint64_t s = root_ ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    std::uint64_t derived = mix(s);
    return RandomStream(derived);
  }

  std::uint64_t root_seed() const { return root_; }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t root_;
  std::mt19937_64 gen_;
};

}  // namespace semiq
