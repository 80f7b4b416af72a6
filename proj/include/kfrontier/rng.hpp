#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace kfrontier {

//! One step of the SplitMix64 sequence; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

//! Derives an independent 64-bit seed from a master seed and a path of
//! stream indices, e.g. derive_seed(master, {ladder_index, replicate}).
//! The result depends only on its arguments, never on scheduling.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path);

//! xoshiro256** generator seeded through SplitMix64.
//!
//! All variate generation (uniform, Poisson) is implemented here so that
//! streams are bit-identical across standard library implementations.
class Rng
{
public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  //! Uniform on [0, 1) with 53 random bits.
  double uniform();

  //! Poisson variate: inversion for mean < 30, PTRS transformed rejection
  //! (Hoermann 1993) otherwise.
  std::uint64_t poisson(double mean);

private:
  std::uint64_t poisson_inversion(double mean);
  std::uint64_t poisson_ptrs(double mean);

  std::array<std::uint64_t, 4> s_{};
};

} // namespace kfrontier
