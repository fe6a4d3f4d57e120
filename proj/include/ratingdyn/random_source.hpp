#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ratingdyn {

// splitmix64 finaliser; used to spread (seed, tag, index) into stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic child seed. Tags separate the roles a seed plays in one
// experiment (population, permutation, lambda draws, ...).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(base ^ mix64(tag)) + index);
}

namespace seed_tag {
inline constexpr std::uint64_t population = 0x706f70;   // "pop"
inline constexpr std::uint64_t permutation = 0x7065726d;  // "perm"
inline constexpr std::uint64_t lambda = 0x6c616d;       // "lam"
inline constexpr std::uint64_t figure = 0x666967;       // "fig"
}  // namespace seed_tag

// One private random stream. The engine is mt19937_64 (output fixed by the
// standard) and all distributions come from Boost.Random, whose algorithms
// are fixed by the library rather than by the standard library vendor, so a
// given (seed, stream_index) yields the same draws everywhere.
//
// Never share an instance between threads; derive one per task instead.
class RandomSource {
 public:
  RandomSource(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  // Uniform on [0, 1).
  double uniform();
  double normal(double mean, double sd);
  // Beta(a, b) via a Gamma ratio; never NaN.
  double beta(double a, double b);
  // Uniform integer in [0, n).
  std::size_t index_below(std::size_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

}  // namespace ratingdyn
