#pragma once

#include <cstdint>
#include <limits>

namespace varprod {

/// Counter-based 64-bit generator. The n-th output is a fixed bijective mix of
/// seed + n * golden-gamma (the SplitMix64 construction), so a stream is fully
/// described by (seed, position) and replays identically on any platform.
///
/// Satisfies std::uniform_random_bit_generator, but the samplers below are
/// implemented here rather than through <random> distributions, whose output
/// differs between standard library implementations.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  constexpr RandomStream() noexcept = default;
  constexpr explicit RandomStream(std::uint64_t seed, std::uint64_t position = 0) noexcept
      : seed_(seed), position_(position) {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }
  constexpr std::uint64_t position() const noexcept { return position_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next_u64(); }
  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept;
  /// Standard normal via the Marsaglia polar method (second variate discarded).
  double standard_normal() noexcept;
  /// Gamma(shape, 1) via Marsaglia-Tsang squeeze/rejection.
  double gamma(double shape);
  /// Chi-square with `dof` degrees of freedom. Integer dof up to 64 uses the
  /// sum of squared normals; otherwise 2 * Gamma(dof / 2).
  double chi_square(double dof);

  /// Child stream for replication `index`. Distinct indices give distinct
  /// child seeds; the master's position is irrelevant.
  RandomStream substream(std::uint64_t index) const noexcept;

  friend constexpr bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t position_ = 0;
};

/// Stafford "mix13" finalizer used by SplitMix64; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline RandomStream substream(const RandomStream& master, std::uint64_t index) noexcept {
  return master.substream(index);
}

}  // namespace varprod
