#include "bmm/rng.hpp"

#include <bit>
#include <cmath>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

namespace bmm {
namespace {

// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kSeedKey = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kStateKey2 = 0x632be59bd9b4e019ULL;
constexpr std::uint64_t kStateKey3 = 0xd1b54a32d192ed03ULL;

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index) {
  // (s0, s1) alone determine (seed, index), which makes the map injective.
  const std::uint64_t h = mix64(seed ^ kSeedKey);
  state_[0] = h;
  state_[1] = mix64(stream_index ^ h);
  state_[2] = mix64(state_[1] + kStateKey2);
  state_[3] = mix64(h + kStateKey3 + stream_index);
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kSeedKey;
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = std::rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() {
  // 53 random bits centred in their cell: strictly inside (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_index(std::uint64_t bound) {
  // Lemire's nearly-divisionless rejection method.
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Ziggurat samplers; both are exact and hold no state between calls.
double RngStream::normal() { return boost::random::normal_distribution<double>()(*this); }

double RngStream::exponential() {
  return boost::random::exponential_distribution<double>()(*this);
}

double RngStream::gamma(double shape) {
  if (shape == 1.0) return exponential();
  if (shape < 1.0) return std::exp(log_gamma_variate(shape));
  // Marsaglia & Tsang (2000).
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::log_gamma_variate(double shape) {
  if (shape >= 1.0) return std::log(gamma(shape));
  const double boosted = gamma(shape + 1.0);
  return std::log(boosted) + std::log(uniform()) / shape;
}

RngStream RngStream::substream(std::uint64_t index) const {
  return derive_substream(mix_seed(seed_, stream_index_), index);
}

RngStream derive_substream(std::uint64_t seed, std::uint64_t index) {
  return RngStream(seed, index);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed ^ 0x5851f42d4c957f2dULL) + tag * kSeedKey + 1);
}

}  // namespace bmm
