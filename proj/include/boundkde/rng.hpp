#pragma once

#include <cstdint>
#include <random>

namespace boundkde {

//! splitmix64 finaliser; used to derive independent stream seeds.
constexpr std::uint64_t
splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

//! Random stream whose state is a pure function of (master seed, stream id),
//! so replicate k draws the same numbers whatever thread runs it.
class Rng
{
public:
  Rng(std::uint64_t master_seed, std::uint64_t stream)
    : engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(~stream)))
  {}

  //! Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

} // namespace boundkde
