#include "binembed/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "binembed/rng.hpp"

namespace binembed {

namespace {

constexpr double kOrthoTol = 1e-9;

// Stream layout inside a sampling seed: stream 0 realizes the basis (when
// needed), point i draws from stream i+1.
constexpr std::uint64_t kBasisStream = 0;

void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double projection_residual(const Vec& x, const std::vector<Vec>& basis) {
  Vec r = x;
  for (const auto& b : basis) {
    const double c = dot(x, b);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * b[i];
  }
  return norm2(r);
}

// Uniformly random orthonormal basis of a d-dimensional subspace of R^n:
// Gaussian rows followed by modified Gram-Schmidt.
std::vector<Vec> random_orthonormal_basis(int n, int d, Rng& rng) {
  std::vector<Vec> basis(d, Vec(n));
  for (auto& b : basis) rng.fill_gaussian(b);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < j; ++k) {
      const double c = dot(basis[j], basis[k]);
      for (int i = 0; i < n; ++i) basis[j][i] -= c * basis[k][i];
    }
    basis[j] = normalized(std::move(basis[j]));
  }
  return basis;
}

}  // namespace

std::string set_kind_name(SetKind kind) {
  switch (kind) {
    case SetKind::Finite: return "finite";
    case SetKind::Subspace: return "subspace";
    case SetKind::Sparse: return "sparse";
    case SetKind::LowRank: return "lowrank";
    case SetKind::GroupSparse: return "group_sparse";
  }
  return "unknown";
}

SetDescriptor SetDescriptor::finite(std::vector<Vec> pts) {
  SetDescriptor d;
  d.kind = SetKind::Finite;
  d.points = std::move(pts);
  d.validate();
  return d;
}

SetDescriptor SetDescriptor::subspace(int n, int d, std::vector<Vec> basis) {
  SetDescriptor desc;
  desc.kind = SetKind::Subspace;
  desc.n = n;
  desc.d = d;
  desc.basis = std::move(basis);
  desc.validate();
  return desc;
}

SetDescriptor SetDescriptor::sparse(int n, int s) {
  SetDescriptor d;
  d.kind = SetKind::Sparse;
  d.n = n;
  d.s = s;
  d.validate();
  return d;
}

SetDescriptor SetDescriptor::low_rank(int n1, int n2, int d) {
  SetDescriptor desc;
  desc.kind = SetKind::LowRank;
  desc.n1 = n1;
  desc.n2 = n2;
  desc.d = d;
  desc.validate();
  return desc;
}

SetDescriptor SetDescriptor::group_sparse(int n,
                                          std::vector<std::vector<int>> groups,
                                          int d) {
  SetDescriptor desc;
  desc.kind = SetKind::GroupSparse;
  desc.n = n;
  desc.groups = std::move(groups);
  desc.d = d;
  desc.validate();
  return desc;
}

void SetDescriptor::validate() const {
  switch (kind) {
    case SetKind::Finite: {
      check(!points.empty(), "finite set needs at least one point");
      const std::size_t n0 = points[0].size();
      for (const auto& p : points) {
        check(p.size() == n0, "finite set points must share a dimension");
        check(is_unit(p), "finite set points must be unit vectors");
      }
      break;
    }
    case SetKind::Subspace: {
      check(n >= 1 && d >= 1 && d <= n, "subspace requires 1 <= d <= n");
      if (!basis.empty()) {
        check(static_cast<int>(basis.size()) == d,
              "subspace basis must have d vectors");
        for (int j = 0; j < d; ++j) {
          check(static_cast<int>(basis[j].size()) == n,
                "subspace basis vectors must have length n");
          check(std::abs(norm2(basis[j]) - 1.0) < kOrthoTol,
                "subspace basis must be orthonormal");
          for (int k = j + 1; k < d; ++k)
            check(std::abs(dot(basis[j], basis[k])) < kOrthoTol,
                  "subspace basis must be orthonormal");
        }
      }
      break;
    }
    case SetKind::Sparse:
      check(n >= 1 && s >= 1 && s <= n, "sparse requires 1 <= s <= n");
      break;
    case SetKind::LowRank:
      check(n1 >= 1 && n2 >= 1, "lowrank requires positive shape");
      check(d >= 1 && d <= std::min(n1, n2),
            "lowrank requires 1 <= d <= min(n1, n2)");
      break;
    case SetKind::GroupSparse: {
      check(n >= 1, "group_sparse requires n >= 1");
      check(!groups.empty(), "group_sparse requires at least one group");
      check(d >= 1 && d <= static_cast<int>(groups.size()),
            "group_sparse requires 1 <= d <= number of groups");
      for (const auto& g : groups) {
        check(!g.empty(), "group_sparse groups must be nonempty");
        for (int idx : g)
          check(idx >= 0 && idx < n, "group index out of range");
      }
      break;
    }
  }
}

int SetDescriptor::ambient_dim() const {
  switch (kind) {
    case SetKind::Finite: return static_cast<int>(points[0].size());
    case SetKind::Subspace:
    case SetKind::Sparse:
    case SetKind::GroupSparse: return n;
    case SetKind::LowRank: return n1 * n2;
  }
  return 0;
}

bool SetDescriptor::contains(const Vec& x, double tol) const {
  if (static_cast<int>(x.size()) != ambient_dim()) return false;
  if (!is_unit(x, tol)) return false;
  switch (kind) {
    case SetKind::Finite:
      return std::any_of(points.begin(), points.end(),
                         [&](const Vec& p) { return dist2(p, x) <= tol; });
    case SetKind::Subspace:
      if (basis.empty())
        throw std::invalid_argument(
            "subspace membership needs a realized basis");
      return projection_residual(x, basis) <= tol;
    case SetKind::Sparse: {
      int nnz = 0;
      for (double v : x)
        if (std::abs(v) > tol) ++nnz;
      return nnz <= s;
    }
    case SetKind::LowRank: {
      const auto sv = singular_values(x, n1, n2);
      for (std::size_t i = d; i < sv.size(); ++i)
        if (sv[i] > tol) return false;
      return true;
    }
    case SetKind::GroupSparse: {
      // Greedy cover of the support by groups; exact for disjoint groups.
      std::vector<bool> needed(x.size(), false);
      int remaining = 0;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > tol) {
          needed[i] = true;
          ++remaining;
        }
      int used = 0;
      while (remaining > 0) {
        int best = -1, best_cover = 0;
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
          int cover = 0;
          for (int idx : groups[gi])
            if (needed[idx]) ++cover;
          if (cover > best_cover) {
            best_cover = cover;
            best = static_cast<int>(gi);
          }
        }
        if (best < 0) return false;  // support outside every group
        for (int idx : groups[best])
          if (needed[idx]) {
            needed[idx] = false;
            --remaining;
          }
        if (++used > d) return false;
      }
      return true;
    }
  }
  return false;
}

nlohmann::json SetDescriptor::to_json() const {
  nlohmann::json j;
  j["kind"] = set_kind_name(kind);
  switch (kind) {
    case SetKind::Finite:
      j["points"] = points;
      break;
    case SetKind::Subspace:
      j["n"] = n;
      j["d"] = d;
      if (!basis.empty()) j["basis"] = basis;
      break;
    case SetKind::Sparse:
      j["n"] = n;
      j["s"] = s;
      break;
    case SetKind::LowRank:
      j["n1"] = n1;
      j["n2"] = n2;
      j["d"] = d;
      break;
    case SetKind::GroupSparse:
      j["n"] = n;
      j["d"] = d;
      j["groups"] = groups;
      break;
  }
  return j;
}

SetDescriptor SetDescriptor::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "finite")
    return finite(j.at("points").get<std::vector<Vec>>());
  if (kind == "subspace") {
    std::vector<Vec> basis;
    if (j.contains("basis")) basis = j.at("basis").get<std::vector<Vec>>();
    return subspace(j.at("n").get<int>(), j.at("d").get<int>(),
                    std::move(basis));
  }
  if (kind == "sparse")
    return sparse(j.at("n").get<int>(), j.at("s").get<int>());
  if (kind == "lowrank")
    return low_rank(j.at("n1").get<int>(), j.at("n2").get<int>(),
                    j.at("d").get<int>());
  if (kind == "group_sparse")
    return group_sparse(j.at("n").get<int>(),
                        j.at("groups").get<std::vector<std::vector<int>>>(),
                        j.at("d").get<int>());
  throw std::invalid_argument("unknown set kind: " + kind);
}

PointCloud sample_points(const SetDescriptor& desc, int p, std::uint64_t seed) {
  desc.validate();
  check(p >= 1, "sample_points requires p >= 1");

  PointCloud cloud;
  cloud.source = desc;
  cloud.seed = seed;
  cloud.points.reserve(p);

  if (desc.kind == SetKind::Subspace && desc.basis.empty()) {
    Rng rng(seed, kBasisStream);
    cloud.source.basis = random_orthonormal_basis(desc.n, desc.d, rng);
  }
  const SetDescriptor& src = cloud.source;

  // Finite sets are sampled without replacement: a uniformly random
  // p-subset, the whole set when p equals its size.
  std::vector<std::uint32_t> finite_pick;
  if (src.kind == SetKind::Finite) {
    check(p <= static_cast<int>(src.points.size()),
          "cannot sample more points than the finite set holds");
    Rng rng(seed, kBasisStream);
    finite_pick = rng.permutation(static_cast<std::uint32_t>(src.points.size()));
  }

  for (int i = 0; i < p; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i) + 1);
    Vec x;
    switch (src.kind) {
      case SetKind::Finite:
        x = src.points[finite_pick[i]];
        break;
      case SetKind::Subspace: {
        Vec coeff(src.d);
        rng.fill_gaussian(coeff);
        x.assign(src.n, 0.0);
        for (int jdx = 0; jdx < src.d; ++jdx)
          for (int k = 0; k < src.n; ++k) x[k] += coeff[jdx] * src.basis[jdx][k];
        x = normalized(std::move(x));
        break;
      }
      case SetKind::Sparse: {
        const auto perm = rng.permutation(src.n);
        x.assign(src.n, 0.0);
        for (int k = 0; k < src.s; ++k) x[perm[k]] = rng.gaussian();
        x = normalized(std::move(x));
        break;
      }
      case SetKind::LowRank: {
        Vec u(src.n1 * src.d), v(src.d * src.n2);
        rng.fill_gaussian(u);
        rng.fill_gaussian(v);
        x.assign(src.n1 * src.n2, 0.0);
        for (int r = 0; r < src.n1; ++r)
          for (int k = 0; k < src.d; ++k) {
            const double urk = u[r * src.d + k];
            for (int c = 0; c < src.n2; ++c)
              x[r * src.n2 + c] += urk * v[k * src.n2 + c];
          }
        x = normalized(std::move(x));
        break;
      }
      case SetKind::GroupSparse: {
        const auto perm = rng.permutation(src.groups.size());
        std::vector<bool> active(src.n, false);
        for (int k = 0; k < src.d; ++k)
          for (int idx : src.groups[perm[k]]) active[idx] = true;
        x.assign(src.n, 0.0);
        for (int k = 0; k < src.n; ++k)
          if (active[k]) x[k] = rng.gaussian();
        x = normalized(std::move(x));
        break;
      }
    }
    cloud.points.push_back(std::move(x));
  }
  return cloud;
}

namespace {

// Per-draw closed-form supremum of <g, v> over the set.
double draw_supremum(const SetDescriptor& desc, const Vec& g) {
  switch (desc.kind) {
    case SetKind::Finite: {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& pt : desc.points) best = std::max(best, dot(g, pt));
      return best;
    }
    case SetKind::Subspace: {
      double s = 0.0;
      if (desc.basis.empty()) {
        for (int i = 0; i < desc.d; ++i) s += g[i] * g[i];
      } else {
        for (const auto& b : desc.basis) {
          const double c = dot(g, b);
          s += c * c;
        }
      }
      return std::sqrt(s);
    }
    case SetKind::Sparse: {
      Vec sq(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) sq[i] = g[i] * g[i];
      std::nth_element(sq.begin(), sq.begin() + (desc.s - 1), sq.end(),
                       std::greater<double>());
      double s = 0.0;
      for (int i = 0; i < desc.s; ++i) s += sq[i];
      return std::sqrt(s);
    }
    case SetKind::LowRank: {
      auto sv = singular_values(g, desc.n1, desc.n2);
      double s = 0.0;
      for (int i = 0; i < desc.d; ++i) s += sv[i] * sv[i];
      return std::sqrt(s);
    }
    case SetKind::GroupSparse: {
      Vec gnorm(desc.groups.size(), 0.0);
      for (std::size_t gi = 0; gi < desc.groups.size(); ++gi)
        for (int idx : desc.groups[gi]) gnorm[gi] += g[idx] * g[idx];
      std::nth_element(gnorm.begin(), gnorm.begin() + (desc.d - 1), gnorm.end(),
                       std::greater<double>());
      double s = 0.0;
      for (int i = 0; i < desc.d; ++i) s += gnorm[i];
      return std::sqrt(s);
    }
  }
  return 0.0;
}

WidthEstimate width_impl(const SetDescriptor& desc, int trials,
                         std::uint64_t seed, bool parallel) {
  desc.validate();
  check(trials >= 1, "gaussian_width requires trials >= 1");
  const int n = desc.ambient_dim();

  // Each trial fills its slot; the reduction below is serial and ordered,
  // so the estimate does not depend on the thread count.
  Vec values(trials);
#pragma omp parallel for schedule(static) if (parallel)
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, t);
    Vec g(n);
    rng.fill_gaussian(g);
    values[t] = draw_supremum(desc, g);
  }

  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / trials;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = trials > 1 ? ss / (trials - 1) : 0.0;
  return {mean, std::sqrt(var / trials), trials};
}

}  // namespace

WidthEstimate gaussian_width(const SetDescriptor& desc, int trials,
                             std::uint64_t seed) {
  return width_impl(desc, trials, seed, true);
}

WidthEstimate gaussian_width_serial(const SetDescriptor& desc, int trials,
                                    std::uint64_t seed) {
  return width_impl(desc, trials, seed, false);
}

double local_set_width(const PointCloud& cloud, double eps, int trials,
                       std::uint64_t seed) {
  check(eps > 0.0, "local_set_width requires eps > 0");
  check(trials >= 1, "local_set_width requires trials >= 1");
  const std::size_t p = cloud.points.size();

  std::vector<Vec> diffs;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      if (dist2(cloud.points[i], cloud.points[j]) > eps) continue;
      Vec diff(cloud.points[i].size());
      for (std::size_t k = 0; k < diff.size(); ++k)
        diff[k] = cloud.points[i][k] - cloud.points[j][k];
      diffs.push_back(std::move(diff));
    }
  if (diffs.empty()) return 0.0;

  const int n = static_cast<int>(cloud.points[0].size());
  Vec values(trials);
#pragma omp parallel for schedule(static)
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, t);
    Vec g(n);
    rng.fill_gaussian(g);
    double best = 0.0;  // the local set contains 0 (a = b)
    for (const auto& diff : diffs) best = std::max(best, std::abs(dot(g, diff)));
    values[t] = best;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / trials;
}

std::vector<double> singular_values(const Vec& a, int rows, int cols) {
  check(rows >= 1 && cols >= 1 &&
            static_cast<int>(a.size()) == rows * cols,
        "singular_values: shape mismatch");

  // Work on the matrix with at least as many rows as columns so the
  // one-sided Jacobi sweeps orthogonalize the smaller side.
  int r = rows, c = cols;
  std::vector<Vec> col(c, Vec(r));
  if (rows >= cols) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) col[j][i] = a[i * cols + j];
  } else {
    r = cols;
    c = rows;
    col.assign(c, Vec(r));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) col[i][j] = a[i * cols + j];
  }

  constexpr double kTol = 1e-14;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < c - 1; ++p)
      for (int q = p + 1; q < c; ++q) {
        const double alpha = dot(col[p], col[p]);
        const double beta = dot(col[q], col[q]);
        const double gamma = dot(col[p], col[q]);
        if (std::abs(gamma) <= kTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (int i = 0; i < r; ++i) {
          const double vp = col[p][i];
          const double vq = col[q][i];
          col[p][i] = cs * vp - sn * vq;
          col[q][i] = sn * vp + cs * vq;
        }
      }
    if (!rotated) break;
  }

  std::vector<double> sv(c);
  for (int j = 0; j < c; ++j) sv[j] = norm2(col[j]);
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

}  // namespace binembed
