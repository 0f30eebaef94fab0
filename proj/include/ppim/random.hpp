#pragma once

#include <cstdint>

namespace ppim {

/// Counter-based uniform stream. Every draw is a pure function of
/// (key, counter), so a substream derived from (seed, index) reproduces the
/// same sequence on every platform and in any scheduling order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t counter = 0)
      : key_(mix(seed)), counter_(counter) {}

  /// Independent stream for trial (or lane) `index` under `seed`.
  static RandomStream substream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix(std::uint64_t x);

 private:
  RandomStream(std::uint64_t key, std::uint64_t counter, int /*raw*/)
      : key_(key), counter_(counter) {}

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace ppim
