#include "ratingdyn/random_source.hpp"

#include <boost/random/beta_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <cmath>

namespace ratingdyn {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t s = mix64(seed);
  const std::uint64_t t = mix64(stream ^ 0x5851f42d4c957f2dULL);
  return std::seed_seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                       static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index) {
  auto seq = make_seed_seq(seed, stream_index);
  engine_.seed(seq);
}

double RandomSource::uniform() { return boost::random::uniform_01<double>{}(engine_); }

double RandomSource::normal(double mean, double sd) {
  return boost::random::normal_distribution<double>(mean, sd)(engine_);
}

double RandomSource::beta(double a, double b) {
  boost::random::beta_distribution<double> dist(a, b);
  for (;;) {
    // Both Gamma draws can underflow to zero for tiny shapes (0/0).
    const double v = dist(engine_);
    if (!std::isnan(v)) return v;
  }
}

std::size_t RandomSource::index_below(std::size_t n) {
  return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

}  // namespace ratingdyn
