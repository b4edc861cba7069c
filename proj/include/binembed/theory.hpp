#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "binembed/vecmath.hpp"

namespace binembed {

/// Sample-complexity regimes. Every bound carries an unspecified absolute
/// constant; it is exposed as c1 (default 1) and results are order-of-
/// magnitude, not calibrated.
enum class Regime {
  SubspaceGlobal,     // c1 * w^2 / delta^2
  ArbitraryGlobal,    // c1 * w^2 * log(1/delta) / delta^4
  SubspaceLocal,      // c1 * w^2 * log(1/delta) / delta
  ArbitraryLocal,     // c1 * w^2 * log(1/delta) / delta^3
  GeneralSharp,       // c1 * max(logN/delta^2, w_loc^2/delta^3)
  GeneralSharpLocal,  // c1 * max(logN/delta,   w_loc^2/delta^3)
  StructuredOptimal,  // c1 * C(K) / delta^2
  SketchedGaussian,   // c1 * w^2 / delta^4
  SketchedFjlt,       // c1 * w^2 / delta^6 (log factors folded into c1)
};

std::string regime_name(Regime r);
Regime regime_from_name(const std::string& name);

struct ComplexityQuery {
  Regime regime = Regime::SubspaceGlobal;
  double omega_sq = 0.0;
  double delta = 0.0;  // in (0,1)
  std::optional<double> log_n_eps;
  std::optional<double> omega_sq_local;
  std::optional<double> c_k;
  double c1 = 1.0;
};

// Evaluates the regime's bound; throws on missing regime-specific fields.
double required_samples(const ComplexityQuery& q);

enum class CoverBoundKind { Sudakov, Subspace };

// Sudakov: c * w^2 / eps^2. Subspace: d * log(c / eps).
double cover_bound(CoverBoundKind kind, double omega_sq_or_d, double eps,
                   double c);

// l1 mass of the k largest / k smallest magnitude entries.
double k_plus(const Vec& x, int k);
double k_minus(const Vec& x, int k);

// Sign-stability instance: true iff ||x||_{k-} > ||y||_{k+} fails or the
// number of sign flips between x and x+y is < k. Holds deterministically;
// used as a fuzzing predicate.
bool sign_stability_check(const Vec& x, const Vec& y, int k);

// P(|g| >= a) for standard normal g.
double q_function(double a);

// The gamma with P(|g| <= gamma) = alpha, inverted numerically to 1e-12.
double gamma_alpha(double alpha);

// Bernoulli KL divergence (natural log); p, q in the open interval (0,1).
double kl_divergence(double p, double q);

// exp(-2 delta^2 m): the two-sided deviation envelope for a single pair.
double chernoff_envelope(double delta, int m);

// exp(-eps^2 n / (4 p)); valid only for eps <= p/2 and p < 1/3.
double modified_chernoff(double eps, double p, int n);

// 2 exp(-eps^2 m / (4 mu)): failure probability for centered sums of
// i.i.d. {-1,0,1} variables with P(nonzero) <= mu; needs eps <= mu/2,
// mu <= 1/3.
double ternary_concentration_bound(double eps, double mu, int m);

// Empirical frequency of ||g||_{floor(delta m)-} >= m delta^2 / 8 over
// `trials` Gaussian vectors of length m. Requires delta * m >= 1.
double k_minus_tail_check(double delta, int m, int trials, std::uint64_t seed);

}  // namespace binembed
