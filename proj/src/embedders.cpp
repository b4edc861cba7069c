#include "binembed/embedders.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "binembed/rng.hpp"

namespace binembed {

namespace {

// Stream layout inside an operator seed. Row r of a dense matrix draws
// from stream r; the named streams below stay clear of any realistic m.
constexpr std::uint64_t kMaskStreamBase = std::uint64_t{1} << 32;
constexpr std::uint64_t kPermStream = std::uint64_t{1} << 33;
constexpr std::uint64_t kSignStream = (std::uint64_t{1} << 33) + 1;
constexpr std::uint64_t kGdiagStream = (std::uint64_t{1} << 33) + 2;
constexpr std::uint64_t kInnerSeedTag = (std::uint64_t{1} << 33) + 3;

void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void fill_dense_rows(Vec& a, int m, int n, std::uint64_t seed) {
  a.resize(static_cast<std::size_t>(m) * n);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < m; ++r) {
    Rng rng(seed, r);
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(r) * n + i] = rng.gaussian();
  }
}

Vec matvec(const Vec& a, int m, int n, const Vec& x) {
  Vec y(m);
  for (int r = 0; r < m; ++r) {
    double s = 0.0;
    const double* row = a.data() + static_cast<std::size_t>(r) * n;
    for (int i = 0; i < n; ++i) s += row[i] * x[i];
    y[r] = s;
  }
  return y;
}

Vec apply_signs(const std::vector<std::int8_t>& signs, const Vec& x) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = signs[i] * x[i];
  return y;
}

}  // namespace

std::string op_kind_name(OpKind kind) {
  switch (kind) {
    case OpKind::DenseGaussian: return "dense";
    case OpKind::SparseGaussian: return "sparse";
    case OpKind::FjltSketch: return "fjlt";
    case OpKind::SketchedBinary: return "sketched";
    case OpKind::FastBinary: return "fast";
  }
  return "unknown";
}

OpKind op_kind_from_name(const std::string& name) {
  if (name == "dense") return OpKind::DenseGaussian;
  if (name == "sparse") return OpKind::SparseGaussian;
  if (name == "fjlt") return OpKind::FjltSketch;
  if (name == "sketched") return OpKind::SketchedBinary;
  if (name == "fast") return OpKind::FastBinary;
  throw std::invalid_argument("unknown operator kind: " + name);
}

EmbeddingOperator build(OpKind kind, int m, int n, std::uint64_t seed,
                        int m_lin, InnerSketch inner) {
  check(m >= 1 && n >= 1, "build requires m, n >= 1");

  EmbeddingOperator op;
  op.kind = kind;
  op.m = m;
  op.n = n;
  op.seed = seed;
  op.inner = inner;

  const std::uint32_t n_padded = next_pow2(static_cast<std::uint32_t>(n));

  switch (kind) {
    case OpKind::DenseGaussian:
      fill_dense_rows(op.dense, m, n, seed);
      break;

    case OpKind::SparseGaussian: {
      // Values share the dense operator's substreams; an independent mask
      // zeroes each entry with probability 2/3 and scales the survivors to
      // variance 3.
      op.dense.resize(static_cast<std::size_t>(m) * n);
      const double scale = std::sqrt(3.0);
#pragma omp parallel for schedule(static)
      for (int r = 0; r < m; ++r) {
        Rng values(seed, r);
        Rng mask(seed, kMaskStreamBase + r);
        for (int i = 0; i < n; ++i) {
          const double g = values.gaussian();
          const bool keep = mask.uniform() < (1.0 / 3.0);
          op.dense[static_cast<std::size_t>(r) * n + i] = keep ? scale * g : 0.0;
        }
      }
      break;
    }

    case OpKind::FjltSketch:
    case OpKind::FastBinary: {
      check(static_cast<std::uint32_t>(m) <= n_padded,
            "subsampled operators require m <= padded dimension");
      Rng perm_rng(seed, kPermStream);
      const auto perm = perm_rng.permutation(n_padded);
      op.rows.assign(perm.begin(), perm.begin() + m);
      DiagonalSign ds(static_cast<std::uint32_t>(n), seed, kSignStream);
      op.signs = std::move(ds.signs);
      if (kind == OpKind::FastBinary) {
        DiagonalGaussian dg(n_padded, seed, kGdiagStream);
        op.gdiag = std::move(dg.values);
      }
      break;
    }

    case OpKind::SketchedBinary: {
      check(m_lin >= 1, "SketchedBinary requires m_lin >= 1");
      op.m_lin = m_lin;
      fill_dense_rows(op.dense, m, m_lin, seed);
      const std::uint64_t f_seed = derive_stream(seed, kInnerSeedTag);
      if (inner == InnerSketch::Gaussian) {
        fill_dense_rows(op.sketch, m_lin, n, f_seed);
        const double scale = 1.0 / std::sqrt(static_cast<double>(m_lin));
        for (auto& v : op.sketch) v *= scale;
      } else {
        check(static_cast<std::uint32_t>(m_lin) <= n_padded,
              "FJLT sketch requires m_lin <= padded dimension");
        Rng perm_rng(f_seed, kPermStream);
        const auto perm = perm_rng.permutation(n_padded);
        op.rows.assign(perm.begin(), perm.begin() + m_lin);
        DiagonalSign ds(static_cast<std::uint32_t>(n), f_seed, kSignStream);
        op.signs = std::move(ds.signs);
      }
      break;
    }
  }
  return op;
}

Vec apply_linear(const EmbeddingOperator& op, const Vec& x) {
  check(static_cast<int>(x.size()) == op.n, "apply_linear: dimension mismatch");

  switch (op.kind) {
    case OpKind::DenseGaussian:
    case OpKind::SparseGaussian:
      return matvec(op.dense, op.m, op.n, x);

    case OpKind::FjltSketch: {
      Vec t = apply_signs(op.signs, x);
      HadamardPlan plan(static_cast<std::uint32_t>(op.n));
      t = fwht(t, plan);
      return subsample(t, op.rows);
    }

    case OpKind::SketchedBinary: {
      Vec t;
      if (op.inner == InnerSketch::Gaussian) {
        t = matvec(op.sketch, op.m_lin, op.n, x);
      } else {
        Vec u = apply_signs(op.signs, x);
        HadamardPlan plan(static_cast<std::uint32_t>(op.n));
        u = fwht(u, plan);
        t = subsample(u, op.rows);
      }
      return matvec(op.dense, op.m, op.m_lin, t);
    }

    case OpKind::FastBinary: {
      Vec t = apply_signs(op.signs, x);
      HadamardPlan plan(static_cast<std::uint32_t>(op.n));
      t = fwht(t, plan);  // D* (the real Hadamard matrix is symmetric)
      for (std::size_t i = 0; i < t.size(); ++i) t[i] *= op.gdiag[i];
      fwht_inplace(t);  // D
      return subsample(t, op.rows);
    }
  }
  throw std::invalid_argument("apply_linear: unknown operator kind");
}

BinaryCode embed(const EmbeddingOperator& op, const Vec& x) {
  check(static_cast<int>(x.size()) == op.n, "embed: dimension mismatch");
  double nrm = 0.0;
  for (double v : x) nrm += v * v;
  if (nrm == 0.0) throw std::invalid_argument("zero vector has no direction");

  const Vec y = apply_linear(op, x);
  BinaryCode code(static_cast<std::uint32_t>(op.m));
  for (int i = 0; i < op.m; ++i)
    if (y[i] >= 0.0) code.set(static_cast<std::uint32_t>(i), true);
  return code;
}

namespace {

std::vector<BinaryCode> embed_batch_impl(const EmbeddingOperator& op,
                                         const std::vector<Vec>& points,
                                         bool parallel) {
  std::vector<BinaryCode> codes(points.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(points.size()); ++i)
    codes[i] = embed(op, points[i]);
  return codes;
}

}  // namespace

std::vector<BinaryCode> embed_batch(const EmbeddingOperator& op,
                                    const std::vector<Vec>& points) {
  return embed_batch_impl(op, points, true);
}

std::vector<BinaryCode> embed_batch_serial(const EmbeddingOperator& op,
                                           const std::vector<Vec>& points) {
  return embed_batch_impl(op, points, false);
}

std::vector<Vec> apply_batch(const EmbeddingOperator& op,
                             const std::vector<Vec>& points) {
  std::vector<Vec> images(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(points.size()); ++i)
    images[i] = apply_linear(op, points[i]);
  return images;
}

void write_codes(const std::string& path, const std::vector<BinaryCode>& codes) {
  if (codes.empty()) throw std::invalid_argument("write_codes: no codes");
  const std::uint32_t m = codes[0].m;
  for (const auto& c : codes)
    if (c.m != m) throw std::invalid_argument("write_codes: mixed code lengths");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);

  const std::uint32_t count = static_cast<std::uint32_t>(codes.size());
  out.write("BNH1", 4);
  out.write(reinterpret_cast<const char*>(&m), 4);
  out.write(reinterpret_cast<const char*>(&count), 4);

  const std::uint32_t bytes_per_code = (m + 7) / 8;
  std::vector<char> buf(bytes_per_code);
  for (const auto& code : codes) {
    for (std::uint32_t j = 0; j < bytes_per_code; ++j)
      buf[j] = static_cast<char>((code.words[j >> 3] >> ((j & 7) * 8)) & 0xFF);
    out.write(buf.data(), bytes_per_code);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<BinaryCode> read_codes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);

  char magic[4];
  std::uint32_t m = 0, count = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&m), 4);
  in.read(reinterpret_cast<char*>(&count), 4);
  if (!in || std::memcmp(magic, "BNH1", 4) != 0)
    throw std::runtime_error("not a BNH1 code file: " + path);

  const std::uint32_t bytes_per_code = (m + 7) / 8;
  std::vector<char> buf(bytes_per_code);
  std::vector<BinaryCode> codes;
  codes.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    in.read(buf.data(), bytes_per_code);
    if (!in) throw std::runtime_error("truncated code file: " + path);
    BinaryCode code(m);
    for (std::uint32_t j = 0; j < bytes_per_code; ++j)
      code.words[j >> 3] |= static_cast<std::uint64_t>(
                                static_cast<unsigned char>(buf[j]))
                            << ((j & 7) * 8);
    if ((m & 63) && !code.words.empty())  // clear padding bits
      code.words.back() &= (std::uint64_t{1} << (m & 63)) - 1;
    codes.push_back(std::move(code));
  }
  return codes;
}

}  // namespace binembed
