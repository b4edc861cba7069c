#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace binembed {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist2(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline bool is_unit(const Vec& a, double tol = 1e-9) {
  return std::abs(norm2(a) - 1.0) < tol;
}

// Returns a/||a||; rejects vectors with no direction.
inline Vec normalized(Vec a) {
  const double n = norm2(a);
  if (n == 0.0 || !std::isfinite(n))
    throw std::invalid_argument("zero vector has no direction");
  for (auto& v : a) v /= n;
  return a;
}

}  // namespace binembed
