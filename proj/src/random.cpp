#include "gldpdq/random.hpp"

namespace gldpdq {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
  return splitmix64(seed ^ splitmix64(stream));
}

std::uint64_t Rng::index(std::uint64_t n) noexcept
{
  // rejection sampling removes the modulo bias
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold)
      return x % n;
  }
}

} // namespace gldpdq
