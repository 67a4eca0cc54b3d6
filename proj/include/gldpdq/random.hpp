#pragma once

#include <cstdint>
#include <random>

namespace gldpdq {

//! Output of the SplitMix64 generator from state x (increment, then mix).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

//! Stable sub-seed for stream `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

//! Seeded generator with implementation-independent output.
//!
//! std::uniform_*_distribution differ between standard libraries, so the
//! conversions are done here to keep streams identical across platforms.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  //! Uniform draw on the open interval (0, 1).
  double uniform_open() noexcept
  {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  //! Uniform integer in [0, n), n > 0.
  std::uint64_t index(std::uint64_t n) noexcept;

private:
  std::mt19937_64 engine_;
};

} // namespace gldpdq
