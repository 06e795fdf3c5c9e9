#pragma once

/**
 * Contact Hamiltonians on (S^{2n+1}, alpha1) and their vector fields.
 *
 * A function h(t, x) generates the contact vector field Y uniquely defined
 * by alpha1(Y) = h and d(alpha1)(Y, .) = dh(R) alpha1 - dh.  On the sphere
 * this has the closed form
 *
 *   Y = h i x + (1/2) J (grad h - <grad h, x> x - dh(R) i x),
 *
 * i.e. the Reeb component plus half the J-rotate of the xi-part of the
 * gradient; no linear solve is involved, and the defining equations hold
 * identically (checked by contact_field_residual).
 */

#include "contactlab/darboux.hpp"
#include "contactlab/displacement.hpp"
#include "contactlab/profiles.hpp"
#include "contactlab/spaces.hpp"

#include <functional>
#include <optional>
#include <utility>

namespace contactlab {

struct ContactHamiltonian {
  std::function<double(double, const CVec&)> value;
  /// Ambient real gradient encoded as a complex vector (optional; finite
  /// differences of the degree-0 extension are used when absent).
  std::function<CVec(double, const CVec&)> gradient;
  bool is_autonomous = true;
  bool is_circle_invariant = false;
  bool is_radial_lift = false;
  /// Exact range of h over the sphere when known analytically.
  std::optional<std::pair<double, double>> known_range;
  std::string name;

  double operator()(double t, const CVec& x) const { return value(t, x); }
};

/// Gradient of the degree-0 extension x -> h(t, x/|x|) by central differences.
inline CVec fd_gradient(const ContactHamiltonian& h, double t, const CVec& x,
                        double step = 1e-6) {
  const int dim = int(x.size());
  CVec g = CVec::Zero(dim);
  CVec xp = x, xm = x;
  for (int j = 0; j < dim; ++j) {
    for (int part = 0; part < 2; ++part) {
      const Complex delta = (part == 0) ? Complex(step, 0) : Complex(0, step);
      xp[j] = x[j] + delta;
      xm[j] = x[j] - delta;
      const double hp = h.value(t, (xp / xp.norm()).eval());
      const double hm = h.value(t, (xm / xm.norm()).eval());
      const double d = (hp - hm) / (2.0 * step);
      g[j] += (part == 0) ? Complex(d, 0) : Complex(0, d);
      xp[j] = x[j];
      xm[j] = x[j];
    }
  }
  return g;
}

inline CVec hamiltonian_gradient(const ContactHamiltonian& h, double t,
                                 const CVec& x) {
  return h.gradient ? h.gradient(t, x) : fd_gradient(h, t, x);
}

/// dh(R_alpha) at x: derivative of h along the Reeb direction i x.
inline double reeb_derivative(const ContactHamiltonian& h, double t,
                              const CVec& x) {
  return real_inner(hamiltonian_gradient(h, t, x), j_mul(x));
}

/// The contact vector field Y_h at (t, x), tangent to the sphere.
inline CVec contact_vector_field(const ContactHamiltonian& h, double t,
                                 const CVec& x) {
  const double hv = h.value(t, x);
  const CVec grad = hamiltonian_gradient(h, t, x);
  const CVec ix = j_mul(x);
  const CVec xi_grad =
      grad - real_inner(grad, x) * x - real_inner(grad, ix) * ix;
  return hv * ix + 0.5 * j_mul(xi_grad);
}

/**
 * Pointwise residual of the defining equations of Y_h at x: checks
 * alpha1(Y) = h and d(alpha1)(Y, v) = dh(R) alpha1(v) - dh(v) against a
 * random tangent frame.
 */
inline double contact_field_residual(const ContactHamiltonian& h, double t,
                                     const CVec& x, Rng& rng) {
  const CVec y = contact_vector_field(h, t, x);
  const CVec grad = hamiltonian_gradient(h, t, x);
  const double dhr = real_inner(grad, j_mul(x));
  double res = std::abs(alpha1_raw(x, y) - h.value(t, x));
  res = std::max(res, std::abs(real_inner(x, y)));  // tangency
  const int dim = int(x.size());
  for (int trial = 0; trial < 2 * dim; ++trial) {
    const CVec v = random_tangent(rng, x);
    const double lhs = dalpha1(y, v);
    const double rhs = dhr * alpha1_raw(x, v) - real_inner(grad, v);
    res = std::max(res, std::abs(lhs - rhs));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

/// Samples h over random points and phases to detect circle invariance.
inline bool detect_circle_invariance(
    const std::function<double(double, const CVec&)>& value, int complex_dim,
    double t, Rng& rng, double tol = 1e-10) {
  std::uniform_real_distribution<double> unif(0.0, kTwoPi);
  for (int i = 0; i < 100; ++i) {
    const CVec x = random_sphere_point(rng, complex_dim);
    const double base = value(t, x);
    for (int p = 0; p < 10; ++p) {
      if (std::abs(value(t, reeb_flow(x, unif(rng))) - base) > tol) {
        return false;
      }
    }
  }
  return true;
}

inline ContactHamiltonian constant_hamiltonian(double c) {
  ContactHamiltonian h;
  h.value = [c](double, const CVec&) { return c; };
  h.gradient = [](double, const CVec& x) { return CVec::Zero(x.size()).eval(); };
  h.is_circle_invariant = true;
  h.known_range = {{c, c}};
  h.name = "constant(" + std::to_string(c) + ")";
  return h;
}

/**
 * The radial lift of H(z) = f(|z|^2) through the Darboux chart:
 * h(x) = f(2 (1 - |x_{n+1}|^2)).  Circle invariant and autonomous, with
 * analytic gradient; range [0, f(0)] is exact (f is monotone).
 */
inline ContactHamiltonian radial_lift(const RadialProfile& f) {
  ContactHamiltonian h;
  h.value = [f](double, const CVec& x) { return f.eval(chart_radius_sq(x)); };
  h.gradient = [f](double, const CVec& x) {
    const int last = int(x.size()) - 1;
    CVec g = CVec::Zero(x.size());
    g[last] = -4.0 * f.deriv(chart_radius_sq(x)) * x[last];
    return g;
  };
  h.is_circle_invariant = true;
  h.is_radial_lift = true;
  h.known_range = {{0.0, f.plateau_value()}};
  h.name = "radial_lift(r=" + std::to_string(f.radius()) +
           ",eps=" + std::to_string(f.eps()) + ")";
  return h;
}

/// Pointwise negation; generates the inverse isotopy of h's flow.
inline ContactHamiltonian negate(const ContactHamiltonian& h) {
  ContactHamiltonian out = h;
  const auto value = h.value;
  out.value = [value](double t, const CVec& x) { return -value(t, x); };
  if (h.gradient) {
    const auto grad = h.gradient;
    out.gradient = [grad](double t, const CVec& x) {
      return (-grad(t, x)).eval();
    };
  }
  if (h.known_range) {
    out.known_range = {{-h.known_range->second, -h.known_range->first}};
  }
  out.name = "-" + h.name;
  return out;
}

/// Sum of two Hamiltonians (flows compose when the two commute).
inline ContactHamiltonian add(const ContactHamiltonian& a,
                              const ContactHamiltonian& b) {
  ContactHamiltonian out;
  const auto va = a.value, vb = b.value;
  out.value = [va, vb](double t, const CVec& x) { return va(t, x) + vb(t, x); };
  if (a.gradient && b.gradient) {
    const auto ga = a.gradient, gb = b.gradient;
    out.gradient = [ga, gb](double t, const CVec& x) {
      return (ga(t, x) + gb(t, x)).eval();
    };
  }
  out.is_autonomous = a.is_autonomous && b.is_autonomous;
  out.is_circle_invariant = a.is_circle_invariant && b.is_circle_invariant;
  out.name = a.name + "+" + b.name;
  return out;
}

/**
 * Quadratic Hamiltonian h_A(x) = <x, A x> of a Hermitian matrix A.  Its
 * contact flow is the unitary x -> e^{iAt} x; these are the strict
 * contactomorphisms used for conjugation tests and rotation displacers.
 */
inline ContactHamiltonian quadratic_hamiltonian(const Eigen::MatrixXcd& A,
                                                const std::string& name) {
  ContactHamiltonian h;
  h.value = [A](double, const CVec& x) { return hermitian(x, (A * x).eval()).real(); };
  h.gradient = [A](double, const CVec& x) { return (2.0 * (A * x)).eval(); };
  h.is_circle_invariant = true;  // dh(R) = 2 Re(i <x, A x>) = 0
  h.name = name;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  h.known_range = {{es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()}};
  return h;
}

/// Lift of a function on CP^n: h = G o pi_1; always circle invariant.
inline ContactHamiltonian lift_hamiltonian(
    const std::function<double(const ProjPoint&)>& G, const std::string& name) {
  ContactHamiltonian h;
  h.value = [G](double, const CVec& x) {
    return G(cp_project(SpherePoint::of(x)));
  };
  h.is_circle_invariant = true;
  h.name = "lift(" + name + ")";
  return h;
}

// ---------------------------------------------------------------------------
// Lifted displacement Hamiltonian (upper-bound pipeline)
// ---------------------------------------------------------------------------

struct LiftedChartHamiltonian {
  ContactHamiltonian h;  ///< alpha1-Hamiltonian on the sphere
  /// Cutoff base Hamiltonian K~ = rho(|z|^2) D(z_1) on chart coordinates.
  std::function<double(const CVec&)> base;
  std::function<CVec(const CVec&)> base_grad;
  double inner_radius = 0.0;  ///< cutoff plateau radius (holds the swept region)
  double outer_radius = 0.0;  ///< cutoff support radius
};

/**
 * Extends a planar displacer D to R^{2n} by K(z) = D(z_1), cuts it off
 * outside the ball that must hold the swept region, pushes it to CP^n
 * through the chart and lifts it to the sphere.
 *
 * Throws SupportOverflow when the swept-region bound does not fit inside
 * the cutoff plateau at lambda_R * 0.999.
 */
inline LiftedChartHamiltonian build_upper_bound_hamiltonian(
    const DisplacementHamiltonian& D, double lambda_R) {
  if (!D.evaluable()) {
    throw ConstraintViolation("build_upper_bound_hamiltonian: metadata-only displacer");
  }
  const double planar_sweep =
      (D.sweep_radius > 0.0) ? D.sweep_radius : D.support_radius;
  const double sweep = std::hypot(planar_sweep, D.displaced_radius);
  const double outer = std::min(lambda_R * 0.999, std::sqrt(2.0) * 0.9995);
  const double inner = sweep * 1.001;
  if (!(inner < outer)) {
    throw SupportOverflow("swept region radius " + std::to_string(sweep) +
                          " does not fit inside cutoff plateau " +
                          std::to_string(outer));
  }
  const RadialCutoff rho(inner, outer);

  LiftedChartHamiltonian out;
  out.inner_radius = inner;
  out.outer_radius = outer;
  const auto deval = D.eval;
  out.base = [rho, deval](const CVec& z) {
    const double u = z.squaredNorm();
    const double c = rho.value_r2(u);
    if (c == 0.0) return 0.0;
    return c * deval(z[0].real(), z[0].imag());
  };
  const auto dgrad = D.grad;
  out.base_grad = [rho, deval, dgrad](const CVec& z) {
    const double u = z.squaredNorm();
    const double c = rho.value_r2(u);
    CVec g = CVec::Zero(z.size());
    if (c == 0.0 && rho.deriv_r2(u) == 0.0) return g;
    const double dv = deval(z[0].real(), z[0].imag());
    g = (2.0 * rho.deriv_r2(u) * dv) * z;
    const Eigen::Vector2d dg = dgrad(z[0].real(), z[0].imag());
    g[0] += c * Complex(dg[0], dg[1]);
    return g;
  };

  const double out2 = outer * outer;
  ContactHamiltonian h;
  h.value = [rho, deval, out2](double, const CVec& x) {
    const CVec xn = x / x.norm();
    const double u = chart_radius_sq(xn);
    if (u >= out2) return 0.0;
    const int last = int(xn.size()) - 1;
    const Complex phase = std::conj(xn[last]) / std::abs(xn[last]);
    const Complex w1 = std::sqrt(2.0) * phase * xn[0];
    return rho.value_r2(u) * deval(w1.real(), w1.imag());
  };
  h.is_circle_invariant = true;
  h.known_range = {{std::min(D.vmin, 0.0), std::max(D.vmax, 0.0)}};
  h.name = "lifted(" + D.kind + ")";
  out.h = h;
  return out;
}

}  // namespace contactlab
