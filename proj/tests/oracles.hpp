// Test-only oracles, independent of the library implementations they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "binembed/vecmath.hpp"

namespace oracles {

// Trapezoid quadrature on [a, b].
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, int steps) {
  const double h = (b - a) / steps;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < steps; ++i) s += f(a + i * h);
  return s * h;
}

// E max(|g1|, |g2|) for independent standard normals, via
// integral of P(max > x) = 1 - erf(x/sqrt(2))^2 over x > 0.
inline double expected_max_abs_two_gaussians() {
  return integrate(
      [](double x) {
        const double e = std::erf(x / std::sqrt(2.0));
        return 1.0 - e * e;
      },
      0.0, 12.0, 400000);
}

// Inverse CDF of |g| by pure bisection on erf.
inline double gamma_alpha_bisect(double alpha) {
  double lo = 0.0, hi = 1.0;
  while (std::erf(hi / std::sqrt(2.0)) < alpha) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::erf(mid / std::sqrt(2.0)) < alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Greedy epsilon-net of a point list under the l2 metric: every point ends
// up within eps of some center; returns the centers' count.
inline int greedy_net_size(const std::vector<binembed::Vec>& points,
                           double eps) {
  std::vector<binembed::Vec> centers;
  for (const auto& p : points) {
    bool covered = false;
    for (const auto& c : centers)
      if (binembed::dist2(p, c) <= eps) {
        covered = true;
        break;
      }
    if (!covered) centers.push_back(p);
  }
  return static_cast<int>(centers.size());
}

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

}  // namespace oracles
