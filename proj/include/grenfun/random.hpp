#pragma once

#include <cstdint>
#include <random>

namespace grenfun {

/// SplitMix64 finalizer. Used to expand user seeds and to derive
/// per-replication seeds.
constexpr std::uint64_t
splitmix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for replication `index` of a study seeded with `seed`. Depends only
/// on the pair, never on scheduling.
constexpr std::uint64_t
derive_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
  return splitmix64(splitmix64(seed) ^ index);
}

/// Seeded random stream with a fixed, documented algorithm.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Uniform and normal variates are produced here rather than
/// through <random> distributions (whose algorithms are implementation
/// defined), so a given seed yields the same stream on every conforming
/// toolchain:
///   - uniform(): top 53 bits scaled by 2^-53, in [0, 1);
///   - normal(): Box-Muller on two uniforms, both outputs used in order.
///
/// Not thread safe; give each thread its own stream.
class RandomStream
{
public:
  explicit RandomStream(std::uint64_t seed)
    : engine_(splitmix64(seed))
  {}

  std::uint64_t bits() { return engine_(); }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal();

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace grenfun
