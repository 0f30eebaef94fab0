#include "ppim/random.hpp"

namespace ppim {

// splitmix64 finalizer
std::uint64_t RandomStream::mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream RandomStream::substream(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t key = mix(mix(seed) ^ mix(index ^ 0x5851f42d4c957f2dULL));
  return RandomStream(key, 0, 0);
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t c = counter_++;
  return mix(key_ ^ mix(c + 0x2545f4914f6cdd1dULL));
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

}  // namespace ppim
