#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binembed/transforms.hpp"
#include "binembed/vecmath.hpp"

namespace binembed {

enum class OpKind {
  DenseGaussian,
  SparseGaussian,
  FjltSketch,
  SketchedBinary,
  FastBinary,
};

// Linear stage inside a SketchedBinary operator.
enum class InnerSketch { Gaussian, Fjlt };

std::string op_kind_name(OpKind kind);
OpKind op_kind_from_name(const std::string& name);

/// Length-m bit vector sgn(Ax), packed in 64-bit words. Bit i of the code
/// is bit (i mod 64) of word (i div 64); bits past m are zero.
struct BinaryCode {
  std::vector<std::uint64_t> words;
  std::uint32_t m = 0;

  explicit BinaryCode(std::uint32_t bits = 0)
      : words((bits + 63) / 64, 0), m(bits) {}

  bool get(std::uint32_t i) const {
    return (words[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::uint32_t i, bool v) {
    if (v)
      words[i >> 6] |= (std::uint64_t{1} << (i & 63));
    else
      words[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  bool operator==(const BinaryCode&) const = default;
};

/// One of the five embedding operators, mapping R^n -> R^m. Rows are drawn
/// from per-row substreams of the seed, so the first m' rows of an operator
/// built at m coincide with the operator built at m' < m.
struct EmbeddingOperator {
  OpKind kind = OpKind::DenseGaussian;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  int m_lin = 0;  // sketch width (SketchedBinary)

  // DenseGaussian / SparseGaussian: row-major m x n.
  // SketchedBinary: B, row-major m x m_lin.
  Vec dense;

  // FjltSketch / FastBinary / SketchedBinary(Fjlt): subsampled rows into
  // the padded index range and the input-side Rademacher diagonal.
  std::vector<std::uint32_t> rows;
  std::vector<std::int8_t> signs;

  // FastBinary: Gaussian diagonal applied between the two transforms.
  Vec gdiag;

  // SketchedBinary(Gaussian): F, row-major m_lin x n, scaled by 1/sqrt(m_lin).
  Vec sketch;

  InnerSketch inner = InnerSketch::Gaussian;
};

// Deterministic operator construction. m_lin is required for SketchedBinary
// and ignored elsewhere; `inner` selects its linear stage.
EmbeddingOperator build(OpKind kind, int m, int n, std::uint64_t seed,
                        int m_lin = 0, InnerSketch inner = InnerSketch::Gaussian);

// Ax, per the kind's composition.
Vec apply_linear(const EmbeddingOperator& op, const Vec& x);

// sgn(Ax) with sgn(0) = +1. Rejects the zero vector.
BinaryCode embed(const EmbeddingOperator& op, const Vec& x);

// Codes for a batch of points; parallel over points.
std::vector<BinaryCode> embed_batch(const EmbeddingOperator& op,
                                    const std::vector<Vec>& points);
std::vector<BinaryCode> embed_batch_serial(const EmbeddingOperator& op,
                                           const std::vector<Vec>& points);

// Images Ax for a batch of points; parallel over points.
std::vector<Vec> apply_batch(const EmbeddingOperator& op,
                             const std::vector<Vec>& points);

// Compact code file: header {magic "BNH1", m: u32 LE, count: u32 LE},
// then ceil(m/8) bytes per code, bit i = bit (i mod 8) of byte (i div 8).
void write_codes(const std::string& path, const std::vector<BinaryCode>& codes);
std::vector<BinaryCode> read_codes(const std::string& path);

}  // namespace binembed
