#pragma once

#include <cstdint>
#include <limits>

namespace qclone {

/**
 * SplitMix64 generator. Satisfies UniformRandomBitGenerator so it can drive
 * the <random> distributions. Seeding is a single store, which is what makes
 * one fresh stream per Monte Carlo trial affordable.
 */
class TrialRng {
 public:
  using result_type = std::uint64_t;

  explicit TrialRng(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed of the stream owned by (trial, stream) under a run seed. Distinct
/// streams of one trial never share state, which gives common random numbers
/// across strategies and replay independent of thread count.
inline std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t trial,
                                 std::uint64_t stream) {
  TrialRng mix(run_seed);
  std::uint64_t s = mix() ^ (trial * 0xd1b54a32d192ed03ULL);
  TrialRng mix2(s);
  return mix2() ^ (stream * 0x8cb92ba72f3d8dd7ULL);
}

}  // namespace qclone
