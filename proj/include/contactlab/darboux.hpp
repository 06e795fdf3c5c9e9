#pragma once

/**
 * An explicit Darboux chart on CP^n: the symplectic embedding
 *
 *   Psi : B^{2n}(sqrt 2) -> CP^n,   Psi(z) = [ z/sqrt2 : sqrt(1 - |z|^2/2) ],
 *
 * where CP^n carries the form omega with pi_1^* omega = d(alpha1).  The
 * pullback Psi^* omega equals the standard omega_0 of R^{2n}; this is a
 * tested invariant, not an assumption.
 */

#include "contactlab/spaces.hpp"

namespace contactlab {

/// Section of pi_1 over the chart: z -> (z/sqrt2, sqrt(1 - |z|^2/2)).
inline CVec chart_section(const CVec& z) {
  const double r2 = z.squaredNorm();
  if (r2 >= 2.0) throw OutOfChart("chart_section: |z|^2 >= 2");
  CVec x(z.size() + 1);
  x.head(z.size()) = z / std::sqrt(2.0);
  x[z.size()] = Complex(std::sqrt(1.0 - 0.5 * r2), 0.0);
  return x;
}

/// The embedding Psi as a map into CP^n.
inline ProjPoint darboux_embed(const CVec& z) {
  return ProjPoint::of(SpherePoint{chart_section(z)});
}

/**
 * Inverse chart: recovers z in B^{2n}(sqrt 2) with darboux_embed(z) = p.
 * Requires the last homogeneous coordinate of p to be nonzero.
 */
inline CVec darboux_invert(const ProjPoint& p, double zero_tol = 1e-12) {
  const CVec& v = p.rep.v;
  const int n = int(v.size()) - 1;
  const Complex last = v[n];
  if (std::abs(last) <= zero_tol) {
    throw OutOfChart("darboux_invert: last homogeneous coordinate vanishes");
  }
  const Complex phase = std::conj(last) / std::abs(last);
  CVec z(n);
  z = std::sqrt(2.0) * (phase * v.head(n));
  return z;
}

/// Squared chart radius of pi_1(x): |Psi^{-1}(pi_1 x)|^2 = 2(1 - |x_{n+1}|^2).
inline double chart_radius_sq(const CVec& x) {
  const int n = int(x.size()) - 1;
  return 2.0 * std::max(0.0, 1.0 - std::norm(x[n]));
}

/**
 * Membership of a sphere point in the lifted Darboux ball
 * B_k(r) = pi_k^{-1}(Psi(B^{2n}(r))): closed form |x_{n+1}|^2 > 1 - r^2/2.
 */
inline bool ball_membership(const CVec& x, double r) {
  if (r <= 0.0 || r > std::sqrt(2.0) + 1e-12) {
    throw ConstraintViolation("ball_membership: need 0 < r <= sqrt(2)");
  }
  const int n = int(x.size()) - 1;
  return std::norm(x[n]) > 1.0 - 0.5 * r * r;
}

/**
 * Sampler for the lifted ball: z uniform in B^{2n}(r) times a uniform fiber
 * phase.  Covers B_k(r); used by displacement verifiers.
 */
inline CVec sample_lifted_ball(Rng& rng, int n, double r) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec z(n);
  for (int j = 0; j < n; ++j) z[j] = Complex(gauss(rng), gauss(rng));
  const double u = std::pow(unif(rng), 1.0 / (2.0 * n));  // radius^{2n} law
  z *= (r * u * 0.999999) / std::max(z.norm(), 1e-300);
  const double theta = kTwoPi * unif(rng);
  return reeb_flow(chart_section(z), theta);
}

}  // namespace contactlab
