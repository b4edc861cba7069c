#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binembed/vecmath.hpp"

#include "json.hpp"

namespace binembed {

enum class SetKind { Finite, Subspace, Sparse, LowRank, GroupSparse };

std::string set_kind_name(SetKind kind);

/// Describes a structured subset of the unit sphere. Which fields are
/// meaningful depends on `kind`; validate() checks the active ones.
struct SetDescriptor {
  SetKind kind = SetKind::Subspace;

  std::vector<Vec> points;  // Finite: the set itself (unit vectors)

  int n = 0;  // ambient dimension (Subspace, Sparse, GroupSparse)
  int d = 0;  // subspace dim / matrix rank / active group count

  // Subspace: d orthonormal vectors of length n. May be empty, in which
  // case samplers realize a uniformly random basis from the seed and the
  // returned cloud records it.
  std::vector<Vec> basis;

  int s = 0;            // Sparse: max nonzeros
  int n1 = 0, n2 = 0;   // LowRank: matrix shape, ambient = n1*n2

  std::vector<std::vector<int>> groups;  // GroupSparse: index groups

  static SetDescriptor finite(std::vector<Vec> pts);
  static SetDescriptor subspace(int n, int d, std::vector<Vec> basis = {});
  static SetDescriptor sparse(int n, int s);
  static SetDescriptor low_rank(int n1, int n2, int d);
  static SetDescriptor group_sparse(int n, std::vector<std::vector<int>> groups,
                                    int d);

  // Throws std::invalid_argument on inconsistent parameters.
  void validate() const;

  int ambient_dim() const;

  // Membership predicate of the described set (up to tol); for Subspace
  // this requires a realized basis.
  bool contains(const Vec& x, double tol = 1e-9) const;

  nlohmann::json to_json() const;
  static SetDescriptor from_json(const nlohmann::json& j);
};

/// Finite sample from a structured set, with the descriptor that produced
/// it (Subspace descriptors carry the realized basis).
struct PointCloud {
  std::vector<Vec> points;
  SetDescriptor source;
  std::uint64_t seed = 0;
};

// Draws p unit vectors from the set by the kind-specific recipe.
// Deterministic given (desc, p, seed); points are independent substreams,
// so the cloud is identical regardless of thread count.
PointCloud sample_points(const SetDescriptor& desc, int p, std::uint64_t seed);

struct WidthEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

// Monte Carlo mean of the per-draw supremum sup_{v in K} <g, v>, using the
// kind-specific closed form of the supremum.
WidthEstimate gaussian_width(const SetDescriptor& desc, int trials,
                             std::uint64_t seed);

// Serial reference for gaussian_width; bit-identical to the parallel path.
WidthEstimate gaussian_width_serial(const SetDescriptor& desc, int trials,
                                    std::uint64_t seed);

// Width of the local set {a-b : a,b in cloud, ||a-b|| <= eps}; 0 when no
// pair of distinct points qualifies.
double local_set_width(const PointCloud& cloud, double eps, int trials,
                       std::uint64_t seed);

// Singular values (descending) of a dense row-major matrix, one-sided
// Jacobi. Intended for the small reshapes used by low-rank widths.
std::vector<double> singular_values(const Vec& a, int rows, int cols);

}  // namespace binembed
