#include "binembed/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace binembed {

namespace {

double clamped_dot(const Vec& x, const Vec& y) {
  return std::clamp(dot(x, y), -1.0, 1.0);
}

double ang_from_dot(double t) { return std::acos(t) / M_PI; }

// Pair statistic with lexicographic tie-break; the comparator is a total
// order, so parallel merges reach the same supremum pair in any order.
bool better(const PairStat& a, const PairStat& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

void consider(PairStat& best, double value, int i, int j) {
  const PairStat cand{value, i, j};
  if (best.i < 0 || better(cand, best)) best = cand;
}

int model_param(const SetDescriptor& set) {
  switch (set.kind) {
    case SetKind::Subspace:
    case SetKind::LowRank:
    case SetKind::GroupSparse: return set.d;
    case SetKind::Sparse: return set.s;
    case SetKind::Finite: return 0;
  }
  return 0;
}

struct TripleBest {
  PairStat bin, lin, nlin;
};

// One scan over all unordered pairs accumulating the requested suprema.
// `images` may be empty when only the binary statistic is needed.
TripleBest pair_scan(const PointCloud& cloud,
                     const std::vector<BinaryCode>* codes,
                     const std::vector<Vec>* images, int m, bool parallel) {
  const int p = static_cast<int>(cloud.points.size());
  const double inv_m = 1.0 / m;
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));

  TripleBest global;
#pragma omp parallel if (parallel)
  {
    TripleBest local;
#pragma omp for schedule(dynamic, 4) nowait
    for (int i = 0; i < p - 1; ++i) {
      for (int j = i + 1; j < p; ++j) {
        const double t = clamped_dot(cloud.points[i], cloud.points[j]);
        const double ang = ang_from_dot(t);
        if (codes) {
          const double ham = hamming((*codes)[i], (*codes)[j]) * inv_m;
          consider(local.bin, std::abs(ham - ang), i, j);
        }
        if (images) {
          const double set_dist = std::sqrt(std::max(0.0, 2.0 - 2.0 * t));
          double img_dist = 0.0;
          {
            const Vec& a = (*images)[i];
            const Vec& b = (*images)[j];
            double s = 0.0;
            for (int k = 0; k < m; ++k) {
              const double d = a[k] - b[k];
              s += d * d;
            }
            img_dist = std::sqrt(s);
          }
          const double lin = std::abs(img_dist * inv_sqrt_m - set_dist);
          consider(local.lin, lin, i, j);
          // identical points contribute 0 to the weighted statistic
          const double nlin = set_dist > 0.0 ? (ang / set_dist) * lin : 0.0;
          consider(local.nlin, nlin, i, j);
        }
      }
    }
#pragma omp critical
    {
      if (local.bin.i >= 0) consider(global.bin, local.bin.value, local.bin.i, local.bin.j);
      if (local.lin.i >= 0) consider(global.lin, local.lin.value, local.lin.i, local.lin.j);
      if (local.nlin.i >= 0)
        consider(global.nlin, local.nlin.value, local.nlin.i, local.nlin.j);
    }
  }
  // sup over the empty pair set is 0
  if (global.bin.i < 0) global.bin = {0.0, -1, -1};
  if (global.lin.i < 0) global.lin = {0.0, -1, -1};
  if (global.nlin.i < 0) global.nlin = {0.0, -1, -1};
  return global;
}

void check_op_matches(const PointCloud& cloud, const EmbeddingOperator& op) {
  if (cloud.points.empty())
    throw std::invalid_argument("distortion: empty cloud");
  if (static_cast<int>(cloud.points[0].size()) != op.n)
    throw std::invalid_argument("distortion: operator dimension mismatch");
}

}  // namespace

double angular_distance(const Vec& x, const Vec& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("angular_distance: dimension mismatch");
  return ang_from_dot(clamped_dot(x, y));
}

std::uint32_t hamming(const BinaryCode& a, const BinaryCode& b) {
  if (a.m != b.m) throw std::invalid_argument("hamming: code length mismatch");
  std::uint32_t count = 0;
  for (std::size_t w = 0; w < a.words.size(); ++w)
    count += static_cast<std::uint32_t>(std::popcount(a.words[w] ^ b.words[w]));
  return count;
}

PairStat binary_distortion(const PointCloud& cloud, const EmbeddingOperator& op) {
  check_op_matches(cloud, op);
  const auto codes = embed_batch(op, cloud.points);
  return pair_scan(cloud, &codes, nullptr, op.m, true).bin;
}

PairStat binary_distortion_serial(const PointCloud& cloud,
                                  const EmbeddingOperator& op) {
  check_op_matches(cloud, op);
  const auto codes = embed_batch_serial(op, cloud.points);
  return pair_scan(cloud, &codes, nullptr, op.m, false).bin;
}

PairStat linear_distortion(const PointCloud& cloud, const EmbeddingOperator& op) {
  check_op_matches(cloud, op);
  const auto images = apply_batch(op, cloud.points);
  return pair_scan(cloud, nullptr, &images, op.m, true).lin;
}

PairStat normalized_linear_distortion(const PointCloud& cloud,
                                      const EmbeddingOperator& op) {
  check_op_matches(cloud, op);
  const auto images = apply_batch(op, cloud.points);
  return pair_scan(cloud, nullptr, &images, op.m, true).nlin;
}

DistortionReport distortion_report(const PointCloud& cloud,
                                   const EmbeddingOperator& op) {
  check_op_matches(cloud, op);
  return distortion_report_from_images(cloud, apply_batch(op, cloud.points),
                                       op.m);
}

DistortionReport distortion_report_from_images(const PointCloud& cloud,
                                               const std::vector<Vec>& images,
                                               int m) {
  if (cloud.points.empty())
    throw std::invalid_argument("distortion: empty cloud");
  if (images.size() != cloud.points.size())
    throw std::invalid_argument("distortion: image count mismatch");
  for (const auto& img : images)
    if (static_cast<int>(img.size()) < m)
      throw std::invalid_argument("distortion: image shorter than m");

  std::vector<BinaryCode> codes(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    BinaryCode code(static_cast<std::uint32_t>(m));
    for (int k = 0; k < m; ++k)
      if (images[i][k] >= 0.0) code.set(static_cast<std::uint32_t>(k), true);
    codes[i] = std::move(code);
  }

  const TripleBest best = pair_scan(cloud, &codes, &images, m, true);

  DistortionReport rep;
  rep.delta_bin = best.bin.value;
  rep.delta_lin = best.lin.value;
  rep.delta_nlin = best.nlin.value;
  rep.argmax_bin = best.bin;
  rep.argmax_lin = best.lin;
  rep.argmax_nlin = best.nlin;
  rep.m = m;
  rep.n = static_cast<int>(cloud.points[0].size());
  rep.p = static_cast<int>(cloud.points.size());
  rep.seed = cloud.seed;
  rep.set = cloud.source;
  return rep;
}

nlohmann::json DistortionReport::to_json() const {
  nlohmann::json j;
  j["delta_bin"] = delta_bin;
  j["delta_lin"] = delta_lin;
  j["delta_nlin"] = delta_nlin;
  j["argmax_bin"] = {argmax_bin.i, argmax_bin.j};
  j["argmax_lin"] = {argmax_lin.i, argmax_lin.j};
  j["argmax_nlin"] = {argmax_nlin.i, argmax_nlin.j};
  j["m"] = m;
  j["n"] = n;
  j["p"] = p;
  j["seed"] = seed;
  SetDescriptor bare = set;
  bare.basis.clear();  // realized bases are bulky and reproducible from seed
  j["set"] = bare.kind == SetKind::Finite ? set.to_json() : bare.to_json();
  return j;
}

const char* DistortionReport::csv_header() {
  return "set,kind,n,d,p,m,seed,delta_bin,delta_lin,delta_nlin";
}

std::string DistortionReport::csv_row(const std::string& op_kind) const {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%s,%d,%d,%d,%d,%llu,%.10g,%.10g,%.10g",
                set_kind_name(set.kind).c_str(), op_kind.c_str(), n,
                model_param(set), p, m,
                static_cast<unsigned long long>(seed), delta_bin, delta_lin,
                delta_nlin);
  return buf;
}

LocalCheck local_check(const PointCloud& cloud, const EmbeddingOperator& op,
                       double delta, double c) {
  check_op_matches(cloud, op);
  return local_check_codes(cloud, embed_batch(op, cloud.points), op.m, delta,
                           c);
}

LocalCheck local_check_codes(const PointCloud& cloud,
                             const std::vector<BinaryCode>& codes, int m,
                             double delta, double c) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("local_check requires 0 < delta < 1");
  if (c <= 0.0) throw std::invalid_argument("local_check requires c > 0");
  if (codes.size() != cloud.points.size())
    throw std::invalid_argument("local_check: code count mismatch");

  LocalCheck result;
  result.eps = c * delta / std::sqrt(std::log(1.0 / delta));

  const int p = static_cast<int>(cloud.points.size());
  const double inv_m = 1.0 / m;

  for (int i = 0; i < p - 1; ++i)
    for (int j = i + 1; j < p; ++j) {
      const double ang = angular_distance(cloud.points[i], cloud.points[j]);
      const double ham = hamming(codes[i], codes[j]) * inv_m;
      if (ang <= result.eps && ham > delta) {
        result.close_pairs_ok = false;
        result.violations.push_back({i, j, true});
      }
      if (ham <= delta / 32.0 && ang > delta) {
        result.far_pairs_ok = false;
        result.violations.push_back({i, j, false});
      }
    }
  return result;
}

ChainedStats chained_stats(const Vec& x, const Vec& y, const Vec& z,
                           const Vec& w, const EmbeddingOperator& op) {
  const Vec ax = apply_linear(op, x);
  const Vec ay = apply_linear(op, y);
  const Vec az = apply_linear(op, z);
  const Vec aw = apply_linear(op, w);

  const auto sgn = [](double v) { return v >= 0.0 ? 1 : -1; };
  ChainedStats st;
  for (int r = 0; r < op.m; ++r) {
    const int sx = sgn(ax[r]), sy = sgn(ay[r]), sz = sgn(az[r]), sw = sgn(aw[r]);
    st.d2 += (sx - sy) * (sx - sy) / 4.0;
    st.d3 += (sx - sy) * (sy - sz) / 4.0;
    st.d4 += (sx - sy) * (sz - sw) / 4.0;
  }
  return st;
}

}  // namespace binembed
