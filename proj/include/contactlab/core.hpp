#pragma once

/**
 * Ambient complex linear algebra for the unit sphere S^{2n+1} in C^{n+1}.
 *
 * R^{2n+2} is identified with C^{n+1} coordinate-wise, z_j = x_j + i y_j.
 * Under this identification the standard contact form on the sphere is
 *
 *   alpha1 = sum_j (x_j dy_j - y_j dx_j),   alpha1_x(w) = Im <x, w>,
 *
 * with <.,.> the Hermitian inner product (conjugate-linear in the first
 * slot), and d(alpha1) = 2 sum_j dx_j ^ dy_j, i.e. 2 Im <u, v> on ambient
 * vectors.  Multiplication by i plays the role of the complex structure J;
 * the Reeb field of alpha1 is R(x) = i x and its flow is x -> e^{it} x.
 */

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace contactlab {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Default tolerance for geometric comparisons; callers may scale it.
inline constexpr double kGeomTol = 1e-9;

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

#define CONTACTLAB_ERROR(NAME)                                \
  struct NAME : std::runtime_error {                          \
    explicit NAME(const std::string& msg)                     \
        : std::runtime_error(std::string(#NAME ": ") + msg) {} \
  }

CONTACTLAB_ERROR(TangencyViolation);
CONTACTLAB_ERROR(DegeneratePoint);
CONTACTLAB_ERROR(OutOfChart);
CONTACTLAB_ERROR(InfeasibleProfile);
CONTACTLAB_ERROR(ResolutionTooCoarse);
CONTACTLAB_ERROR(SupportOverflow);
CONTACTLAB_ERROR(MissingConformalFactor);
CONTACTLAB_ERROR(AmbiguousCrossing);
CONTACTLAB_ERROR(EmptySpectrum);
CONTACTLAB_ERROR(DisplacementNotVerified);
CONTACTLAB_ERROR(ConstraintViolation);
CONTACTLAB_ERROR(StructureViolation);
CONTACTLAB_ERROR(InsufficientSamples);
CONTACTLAB_ERROR(ConfigError);

#undef CONTACTLAB_ERROR

// ---------------------------------------------------------------------------
// Ambient operations
// ---------------------------------------------------------------------------

/// Hermitian inner product, conjugate-linear in the first argument.
inline Complex hermitian(const CVec& a, const CVec& b) { return a.dot(b); }

/// Real (Euclidean) inner product of the underlying R^{2n+2} vectors.
inline double real_inner(const CVec& a, const CVec& b) {
  return a.dot(b).real();
}

/// Multiplication by i, the ambient complex structure J.
inline CVec j_mul(const CVec& v) { return Complex(0.0, 1.0) * v; }

/// alpha1 at x evaluated on an ambient vector w: Im <x, w>.
inline double alpha1_raw(const CVec& x, const CVec& w) {
  return hermitian(x, w).imag();
}

/// d(alpha1) = 2 sum dx_j ^ dy_j evaluated on ambient vectors.
inline double dalpha1(const CVec& u, const CVec& v) {
  return 2.0 * hermitian(u, v).imag();
}

/**
 * alpha1 at a sphere point x on a tangent vector w.
 *
 * Throws TangencyViolation when <x, w>_R deviates from zero beyond tol
 * (scaled by the norm of w).
 */
inline double alpha1_eval(const CVec& x, const CVec& w, double tol = kGeomTol) {
  const double t = real_inner(x, w);
  if (std::abs(t) > tol * std::max(1.0, w.norm())) {
    throw TangencyViolation("alpha1_eval: <x,w>_R = " + std::to_string(t));
  }
  return alpha1_raw(x, w);
}

/// Reeb flow of alpha1 at time t: x -> e^{it} x.
inline CVec reeb_flow(const CVec& x, double t) {
  return std::polar(1.0, t) * x;
}

/// Reeb vector field R(x) = i x.
inline CVec reeb_field(const CVec& x) { return j_mul(x); }

/// Projects an ambient vector onto the tangent space of the sphere at x.
inline CVec tangent_project(const CVec& x, const CVec& w) {
  return w - real_inner(x, w) * x;
}

// ---------------------------------------------------------------------------
// Deterministic sampling
// ---------------------------------------------------------------------------

/// Deterministic RNG used throughout; all sampling is reproducible by seed.
using Rng = std::mt19937_64;

/// Uniform random point of S^{2n+1} subset C^{n+1} (dim = n+1 complex slots).
inline CVec random_sphere_point(Rng& rng, int complex_dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec v(complex_dim);
  for (int j = 0; j < complex_dim; ++j) {
    v[j] = Complex(gauss(rng), gauss(rng));
  }
  const double nrm = v.norm();
  if (nrm < 1e-14) return random_sphere_point(rng, complex_dim);
  return v / nrm;
}

/// Random unit tangent vector at a sphere point x.
inline CVec random_tangent(Rng& rng, const CVec& x) {
  for (;;) {
    CVec w = tangent_project(x, random_sphere_point(rng, int(x.size())));
    const double nrm = w.norm();
    if (nrm > 1e-8) return w / nrm;
  }
}

/// Random special-unitary-like matrix (Haar via QR of a complex Gaussian).
inline Eigen::MatrixXcd random_unitary(Rng& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    q.col(j) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
  }
  return q;
}

}  // namespace contactlab
