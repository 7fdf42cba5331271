#pragma once

#include <cstdint>

#include "sdwsn/mat.hpp"

namespace sdwsn {

/// xoshiro256++ with splitmix64 seeding. Self-contained so that identically
/// seeded runs produce identical streams on every platform and toolchain.
/// Gaussian variates come from the polar Box-Muller transform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal.
  double normal();
  /// Uniform integer in [0, n).
  int uniform_int(int n);

  Mat normal_mat(int rows, int cols);
  Mat uniform_mat(int rows, int cols, double lo = 0.0, double hi = 1.0);

  /// Derive an independent generator for a named substream.
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace sdwsn
