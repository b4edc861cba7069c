#pragma once

#include <cstdint>
#include <vector>

#include "binembed/embedders.hpp"
#include "binembed/sets.hpp"
#include "binembed/vecmath.hpp"

#include "json.hpp"

namespace binembed {

// Geodesic distance normalized by pi, in [0,1].
double angular_distance(const Vec& x, const Vec& y);

// Number of differing bits.
std::uint32_t hamming(const BinaryCode& a, const BinaryCode& b);

/// A supremum plus the first pair attaining it (lexicographic tie-break).
struct PairStat {
  double value = 0.0;
  int i = -1;
  int j = -1;
};

/// Per-cloud distortion statistics for one operator.
struct DistortionReport {
  double delta_bin = 0.0;
  double delta_lin = 0.0;
  double delta_nlin = 0.0;
  PairStat argmax_bin, argmax_lin, argmax_nlin;
  int m = 0, n = 0, p = 0;
  std::uint64_t seed = 0;
  SetDescriptor set;

  nlohmann::json to_json() const;
  static const char* csv_header();  // set,kind,n,d,p,m,seed,...
  std::string csv_row(const std::string& op_kind) const;
};

// sup over unordered pairs of |hamming/m - ang(x,y)|; 0 for clouds with
// fewer than two points.
PairStat binary_distortion(const PointCloud& cloud, const EmbeddingOperator& op);
PairStat binary_distortion_serial(const PointCloud& cloud,
                                  const EmbeddingOperator& op);

// sup over pairs of | ||A(x-y)||_2 / sqrt(m) - ||x-y||_2 |.
PairStat linear_distortion(const PointCloud& cloud, const EmbeddingOperator& op);

// Same statistic weighted per pair by ang(x,y)/||x-y||_2 (identical points
// contribute 0).
PairStat normalized_linear_distortion(const PointCloud& cloud,
                                      const EmbeddingOperator& op);

// All three suprema in one pass over the pair set.
DistortionReport distortion_report(const PointCloud& cloud,
                                   const EmbeddingOperator& op);

// Same report from precomputed images Ax of length m; codes are the image
// signs. Lets callers slice one embedding at the largest m across a grid.
DistortionReport distortion_report_from_images(const PointCloud& cloud,
                                               const std::vector<Vec>& images,
                                               int m);

/// Outcome of the two local-embedding implications over all pairs.
struct LocalCheck {
  bool close_pairs_ok = true;  // ang <= eps implies hamming/m <= delta
  bool far_pairs_ok = true;    // hamming/m <= delta/32 implies ang <= delta
  struct Violation {
    int i = 0, j = 0;
    bool close_side = false;  // which implication failed
  };
  std::vector<Violation> violations;
  double eps = 0.0;
};

// eps = c * delta / sqrt(log(1/delta)).
LocalCheck local_check(const PointCloud& cloud, const EmbeddingOperator& op,
                       double delta, double c = 1.0);

// Same check against precomputed codes of length m.
LocalCheck local_check_codes(const PointCloud& cloud,
                             const std::vector<BinaryCode>& codes, int m,
                             double delta, double c = 1.0);

/// The chained statistics d(x,y), d(x,y,z), d(x,y,z,w) built from +/-1 sign
/// vectors; each inner product is divided by 4.
struct ChainedStats {
  double d2 = 0.0;
  double d3 = 0.0;
  double d4 = 0.0;
};

ChainedStats chained_stats(const Vec& x, const Vec& y, const Vec& z,
                           const Vec& w, const EmbeddingOperator& op);

}  // namespace binembed
