#include "binembed/transforms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace binembed {

void fwht_inplace(std::vector<double>& x) {
  const std::size_t n = x.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = x[j];
        const double b = x[j + h];
        x[j] = a + b;
        x[j + h] = a - b;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : x) v *= scale;
}

Vec fwht(const Vec& x, const HadamardPlan& plan) {
  if (x.size() != plan.original_n)
    throw std::invalid_argument("fwht: input length does not match plan");
  Vec buf(plan.n_padded, 0.0);
  std::copy(x.begin(), x.end(), buf.begin());
  fwht_inplace(buf);
  return buf;
}

Vec hadamard_multiply_naive(const Vec& x, const HadamardPlan& plan) {
  if (x.size() != plan.original_n)
    throw std::invalid_argument("fwht: input length does not match plan");
  const std::uint32_t n = plan.n_padded;
  Vec pad(n, 0.0);
  std::copy(x.begin(), x.end(), pad.begin());
  Vec out(n, 0.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::uint32_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::uint32_t c = 0; c < n; ++c) {
      // H[r][c] = (-1)^{popcount(r & c)}
      s += (std::popcount(r & c) & 1) ? -pad[c] : pad[c];
    }
    out[r] = s * scale;
  }
  return out;
}

Vec subsample(const Vec& x, const std::vector<std::uint32_t>& rows) {
  if (rows.empty()) throw std::invalid_argument("subsample: empty row list");
  const std::uint32_t n_padded = next_pow2(static_cast<std::uint32_t>(x.size()));
  const double scale =
      std::sqrt(static_cast<double>(n_padded) / static_cast<double>(rows.size()));
  Vec out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= x.size())
      throw std::invalid_argument("subsample: row index out of range");
    out[i] = x[rows[i]] * scale;
  }
  return out;
}

DiagonalSign::DiagonalSign(std::uint32_t n, std::uint64_t seed_value,
                           std::uint64_t stream)
    : signs(n), seed(seed_value) {
  Rng rng(seed_value, stream);
  for (auto& s : signs) s = static_cast<std::int8_t>(rng.sign());
}

Vec DiagonalSign::apply(const Vec& x) const {
  if (x.size() != signs.size())
    throw std::invalid_argument("DiagonalSign: length mismatch");
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = signs[i] * x[i];
  return out;
}

DiagonalGaussian::DiagonalGaussian(std::uint32_t n, std::uint64_t seed_value,
                                   std::uint64_t stream)
    : values(n), seed(seed_value) {
  Rng rng(seed_value, stream);
  rng.fill_gaussian(values);
}

Vec DiagonalGaussian::apply(const Vec& x) const {
  if (x.size() != values.size())
    throw std::invalid_argument("DiagonalGaussian: length mismatch");
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = values[i] * x[i];
  return out;
}

}  // namespace binembed
