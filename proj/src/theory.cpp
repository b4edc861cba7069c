#include "binembed/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "binembed/rng.hpp"

namespace binembed {

namespace {

void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double require(const std::optional<double>& field, const char* msg) {
  if (!field) throw std::invalid_argument(msg);
  return *field;
}

}  // namespace

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::SubspaceGlobal: return "subspace-global";
    case Regime::ArbitraryGlobal: return "arbitrary-global";
    case Regime::SubspaceLocal: return "subspace-local";
    case Regime::ArbitraryLocal: return "arbitrary-local";
    case Regime::GeneralSharp: return "general-sharp";
    case Regime::GeneralSharpLocal: return "general-sharp-local";
    case Regime::StructuredOptimal: return "structured-optimal";
    case Regime::SketchedGaussian: return "sketched-gaussian";
    case Regime::SketchedFjlt: return "sketched-fjlt";
  }
  return "unknown";
}

Regime regime_from_name(const std::string& name) {
  for (Regime r :
       {Regime::SubspaceGlobal, Regime::ArbitraryGlobal, Regime::SubspaceLocal,
        Regime::ArbitraryLocal, Regime::GeneralSharp, Regime::GeneralSharpLocal,
        Regime::StructuredOptimal, Regime::SketchedGaussian,
        Regime::SketchedFjlt})
    if (regime_name(r) == name) return r;
  throw std::invalid_argument("unknown regime: " + name);
}

double required_samples(const ComplexityQuery& q) {
  check(q.delta > 0.0 && q.delta < 1.0, "delta must be in (0,1)");
  check(q.omega_sq >= 0.0, "omega_sq must be nonnegative");
  check(q.c1 > 0.0, "c1 must be positive");
  const double d = q.delta;
  const double logd = std::log(1.0 / d);

  switch (q.regime) {
    case Regime::SubspaceGlobal:
      return q.c1 * q.omega_sq / (d * d);
    case Regime::ArbitraryGlobal:
      return q.c1 * q.omega_sq * logd / (d * d * d * d);
    case Regime::SubspaceLocal:
      return q.c1 * q.omega_sq * logd / d;
    case Regime::ArbitraryLocal:
      return q.c1 * q.omega_sq * logd / (d * d * d);
    case Regime::GeneralSharp: {
      const double logn = require(q.log_n_eps, "general-sharp needs log_n_eps");
      const double wloc =
          require(q.omega_sq_local, "general-sharp needs omega_sq_local");
      check(logn >= 0.0 && wloc >= 0.0, "inputs must be nonnegative");
      return q.c1 * std::max(logn / (d * d), wloc / (d * d * d));
    }
    case Regime::GeneralSharpLocal: {
      const double logn =
          require(q.log_n_eps, "general-sharp-local needs log_n_eps");
      const double wloc =
          require(q.omega_sq_local, "general-sharp-local needs omega_sq_local");
      check(logn >= 0.0 && wloc >= 0.0, "inputs must be nonnegative");
      return q.c1 * std::max(logn / d, wloc / (d * d * d));
    }
    case Regime::StructuredOptimal: {
      const double ck = require(q.c_k, "structured-optimal needs c_k");
      check(ck >= 0.0, "c_k must be nonnegative");
      return q.c1 * ck / (d * d);
    }
    case Regime::SketchedGaussian:
      return q.c1 * q.omega_sq / (d * d * d * d);
    case Regime::SketchedFjlt:
      return q.c1 * q.omega_sq / (d * d * d * d * d * d);
  }
  throw std::invalid_argument("unknown regime");
}

double cover_bound(CoverBoundKind kind, double omega_sq_or_d, double eps,
                   double c) {
  check(eps > 0.0 && eps <= 1.0, "cover_bound requires eps in (0,1]");
  check(c > 0.0, "cover_bound requires c > 0");
  check(omega_sq_or_d >= 0.0, "cover_bound requires nonnegative size");
  switch (kind) {
    case CoverBoundKind::Sudakov:
      return c * omega_sq_or_d / (eps * eps);
    case CoverBoundKind::Subspace:
      return omega_sq_or_d * std::log(c / eps);
  }
  throw std::invalid_argument("unknown cover bound kind");
}

namespace {

double k_sorted_sum(const Vec& x, int k, bool top) {
  check(k >= 1 && k <= static_cast<int>(x.size()), "k out of range");
  Vec mag(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mag[i] = std::abs(x[i]);
  if (top)
    std::nth_element(mag.begin(), mag.begin() + (k - 1), mag.end(),
                     std::greater<double>());
  else
    std::nth_element(mag.begin(), mag.begin() + (k - 1), mag.end());
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += mag[i];
  return s;
}

}  // namespace

double k_plus(const Vec& x, int k) { return k_sorted_sum(x, k, true); }

double k_minus(const Vec& x, int k) { return k_sorted_sum(x, k, false); }

bool sign_stability_check(const Vec& x, const Vec& y, int k) {
  check(x.size() == y.size(), "sign_stability_check: length mismatch");
  check(k >= 1 && k <= static_cast<int>(x.size()), "k out of range");
  if (!(k_minus(x, k) > k_plus(y, k))) return true;  // hypothesis fails
  int flips = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool sx = x[i] >= 0.0;
    const bool sxy = x[i] + y[i] >= 0.0;
    if (sx != sxy) ++flips;
  }
  return flips < k;
}

double q_function(double a) {
  check(a >= 0.0, "q_function requires a >= 0");
  return std::erfc(a / std::sqrt(2.0));
}

double gamma_alpha(double alpha) {
  check(alpha > 0.0 && alpha < 1.0, "gamma_alpha requires alpha in (0,1)");
  // Solve erf(g / sqrt(2)) = alpha. Newton from a bracketing start, with
  // bisection whenever a step leaves the bracket.
  double lo = 0.0, hi = 1.0;
  while (std::erf(hi / std::sqrt(2.0)) < alpha) hi *= 2.0;
  double g = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = std::erf(g / std::sqrt(2.0)) - alpha;
    if (f > 0.0)
      hi = g;
    else
      lo = g;
    const double deriv = std::sqrt(2.0 / M_PI) * std::exp(-0.5 * g * g);
    double next = deriv > 0.0 ? g - f / deriv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - g) < 1e-13 * (1.0 + std::abs(g))) {
      g = next;
      break;
    }
    g = next;
  }
  return g;
}

double kl_divergence(double p, double q) {
  check(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0,
        "kl_divergence requires p, q in (0,1)");
  return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

double chernoff_envelope(double delta, int m) {
  check(delta > 0.0 && m >= 1, "chernoff_envelope requires delta > 0, m >= 1");
  return std::exp(-2.0 * delta * delta * m);
}

double modified_chernoff(double eps, double p, int n) {
  check(p > 0.0 && p < 1.0 / 3.0, "modified_chernoff requires p < 1/3");
  check(eps > 0.0 && eps <= p / 2.0, "modified_chernoff requires eps <= p/2");
  check(n >= 1, "modified_chernoff requires n >= 1");
  return std::exp(-eps * eps * n / (4.0 * p));
}

double ternary_concentration_bound(double eps, double mu, int m) {
  check(mu > 0.0 && mu <= 1.0 / 3.0,
        "ternary_concentration_bound requires mu <= 1/3");
  check(eps > 0.0 && eps <= mu / 2.0,
        "ternary_concentration_bound requires eps <= mu/2");
  check(m >= 1, "ternary_concentration_bound requires m >= 1");
  return 2.0 * std::exp(-eps * eps * m / (4.0 * mu));
}

double k_minus_tail_check(double delta, int m, int trials, std::uint64_t seed) {
  check(delta > 0.0 && delta <= 1.0, "delta must be in (0,1]");
  check(m >= 1 && trials >= 1, "m and trials must be positive");
  const int k = static_cast<int>(delta * m);
  check(k >= 1, "k_minus_tail_check requires delta * m >= 1");
  const double threshold = m * delta * delta / 8.0;

  long long successes = 0;
#pragma omp parallel for schedule(static) reduction(+ : successes)
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, t);
    Vec g(m);
    rng.fill_gaussian(g);
    if (k_minus(g, k) >= threshold) ++successes;
  }
  return static_cast<double>(successes) / trials;
}

}  // namespace binembed
