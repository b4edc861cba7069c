#pragma once

#include <cstdint>
#include <vector>

#include "binembed/rng.hpp"
#include "binembed/vecmath.hpp"

namespace binembed {

inline std::uint32_t next_pow2(std::uint32_t n) {
  std::uint32_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Sizing for the normalized Walsh-Hadamard transform. Inputs whose length
/// is not a power of two are zero-padded to n_padded.
struct HadamardPlan {
  std::uint32_t original_n = 0;
  std::uint32_t n_padded = 0;

  explicit HadamardPlan(std::uint32_t n)
      : original_n(n), n_padded(next_pow2(n)) {}
};

// In-place transform of a buffer whose length must be a power of two.
// Scaled by 1/sqrt(len), so the transform is an involution and an isometry.
void fwht_inplace(std::vector<double>& x);

// H * pad(x) for the plan's padded size. O(n log n).
Vec fwht(const Vec& x, const HadamardPlan& plan);

// Reference O(n^2) Hadamard multiply, kept for testing the fast path.
Vec hadamard_multiply_naive(const Vec& x, const HadamardPlan& plan);

// Gathers x at the listed coordinates, scaled by sqrt(n_padded / rows),
// so that a uniformly subsampled flat-spectrum vector keeps its expected
// squared norm.
Vec subsample(const Vec& x, const std::vector<std::uint32_t>& rows);

/// Diagonal matrix of independent Rademacher signs.
struct DiagonalSign {
  std::vector<std::int8_t> signs;
  std::uint64_t seed = 0;

  DiagonalSign() = default;
  DiagonalSign(std::uint32_t n, std::uint64_t seed_value,
               std::uint64_t stream = 0);

  Vec apply(const Vec& x) const;
};

/// Diagonal matrix of independent standard normal entries.
struct DiagonalGaussian {
  Vec values;
  std::uint64_t seed = 0;

  DiagonalGaussian() = default;
  DiagonalGaussian(std::uint32_t n, std::uint64_t seed_value,
                   std::uint64_t stream = 0);

  Vec apply(const Vec& x) const;
};

}  // namespace binembed
