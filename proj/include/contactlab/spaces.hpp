#pragma once

/**
 * The three point spaces: the sphere S^{2n+1}, the lens space
 * L_k^{2n+1} = S^{2n+1}/Z_k and the projective space CP^n = S^{2n+1}/S^1.
 *
 * Quotient points are always stored through sphere representatives and
 * compared with equivalence-aware distances; no abstract cosets.
 */

#include "contactlab/core.hpp"

#include <algorithm>

namespace contactlab {

/// Point of the unit sphere S^{2n+1}; holds a unit vector of C^{n+1}.
struct SpherePoint {
  CVec v;

  /// Validates and renormalizes; throws DegeneratePoint on (near-)zero input.
  static SpherePoint of(const CVec& raw, double tol = 1e-12) {
    const double nrm = raw.norm();
    if (nrm < 1e-10) throw DegeneratePoint("SpherePoint::of: zero vector");
    SpherePoint p{raw / nrm};
    (void)tol;
    return p;
  }

  int complex_dim() const { return int(v.size()); }
};

/// Chordal distance between two S^1-orbits: min over phases of |e^{it}a - b|,
/// attained at t = arg <a, b> and evaluated by direct subtraction (the
/// closed form sqrt(2 - 2|<a,b>|) cancels badly near zero distance).
inline double circle_orbit_distance(const CVec& a, const CVec& b) {
  const Complex c = hermitian(a, b);
  if (std::abs(c) < 1e-300) return std::sqrt(2.0);
  return (std::polar(1.0, std::arg(c)) * a - b).norm();
}

/// Distance on the Z_k quotient: min over k-th roots of unity rotations.
inline double lens_distance(const CVec& a, const CVec& b, int k) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    best = std::min(best, (reeb_flow(a, kTwoPi * j / k) - b).norm());
  }
  return best;
}

/// Point of the lens space L_k^{2n+1}, stored by a sphere representative.
struct LensPoint {
  SpherePoint rep;
  int k = 1;

  double distance_to(const LensPoint& other) const {
    if (other.k != k) {
      throw ConstraintViolation("LensPoint: mixed quotient orders");
    }
    return lens_distance(rep.v, other.rep.v, k);
  }

  bool equals(const LensPoint& other, double tol = kGeomTol) const {
    return distance_to(other) <= tol;
  }
};

/**
 * Canonical representative of a projective point: the phase is fixed so
 * that the last nonzero coordinate is real and positive.
 */
inline CVec canonical_proj_rep(const CVec& v, double zero_tol = 1e-12) {
  int last = -1;
  for (int j = int(v.size()) - 1; j >= 0; --j) {
    if (std::abs(v[j]) > zero_tol) {
      last = j;
      break;
    }
  }
  if (last < 0) throw DegeneratePoint("canonical_proj_rep: zero vector");
  const Complex phase = std::conj(v[last]) / std::abs(v[last]);
  return phase * v;
}

/// Point of CP^n, stored by a canonicalized sphere representative.
struct ProjPoint {
  SpherePoint rep;  // canonical: last nonzero coordinate real positive

  static ProjPoint of(const SpherePoint& p) {
    return ProjPoint{SpherePoint{canonical_proj_rep(p.v)}};
  }

  /// Fubini-Study chordal distance between the underlying S^1 orbits.
  double distance_to(const ProjPoint& other) const {
    return circle_orbit_distance(rep.v, other.rep.v);
  }

  bool equals(const ProjPoint& other, double tol = kGeomTol) const {
    return distance_to(other) <= tol;
  }
};

/// Covering projection S^{2n+1} -> L_k^{2n+1}.
inline LensPoint lens_project(const SpherePoint& x, int k) {
  if (k < 1) throw ConstraintViolation("lens_project: k must be >= 1");
  return LensPoint{x, k};
}

/// Projection S^{2n+1} -> CP^n.
inline ProjPoint cp_project(const SpherePoint& x) { return ProjPoint::of(x); }

}  // namespace contactlab
