#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace simplex_lab {

/// Seeded generator identified by (seed, stream). Equal identifiers give
/// bit-identical draw sequences on every platform: the engine and seeding
/// are fully specified by the standard, and every variate below is derived
/// from raw 64-bit words without the implementation-defined std
/// distributions.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Independent child stream; children of the same parent with the same
  /// index are identical.
  RngStream substream(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace simplex_lab
