#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace bmm {

/// Reproducible random stream identified by a (seed, stream_index) pair.
///
/// Streams are xoshiro256** generators whose 256-bit state is built from
/// bijective 64-bit finalizers of the seed and the index, so distinct pairs
/// never share a state. Nothing is shared between streams: callers that want
/// parallelism hand each worker its own stream.
class RngStream {
public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform();

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);

  double normal();
  double exponential();

  /// Gamma(shape, 1) variate.
  double gamma(double shape);

  /// log of a Gamma(shape, 1) variate. For shape < 1 this uses
  /// G_shape = G_{shape+1} * U^{1/shape} in log space, so tiny shapes do not
  /// underflow to zero.
  double log_gamma_variate(double shape);

  /// Child stream keyed by this stream's identity and `index`.
  RngStream substream(std::uint64_t index) const;

private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::array<std::uint64_t, 4> state_{};
};

/// Deterministic, injective over (seed, index).
RngStream derive_substream(std::uint64_t seed, std::uint64_t index);

/// Hash a seed with a tag; used to carve disjoint families of substreams
/// (data draws, weight draws, resampling) out of one user seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace bmm
