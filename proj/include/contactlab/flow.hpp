#pragma once

/**
 * Flows of contact Hamiltonians: fixed-step RK4 on the sphere with per-step
 * renormalization, simultaneous integration of the alpha1-conformal factor
 * g (g' = dh_t(R) along the trajectory, so exp(g) gives phi_t^* alpha1 =
 * e^{g_t} alpha1), plus exact closed forms for the radial and unitary
 * families used as oracles.
 */

#include "contactlab/hamiltonian.hpp"

namespace contactlab {

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// Flow of H(z) = f(|z|^2) in R^{2n} ~ C^n: z -> e^{2 f'(|z|^2) i t} z.
inline CVec radial_flow_r2n(const RadialProfile& f, const CVec& z, double t) {
  return std::polar(1.0, 2.0 * f.deriv(z.squaredNorm()) * t) * z;
}

/**
 * Exact flow of the radial lift on the sphere.  With u = 2(1 - |x_last|^2)
 * the head rotates by (f + (2-u) f') t and the last coordinate by
 * (f - u f') t; over the plateau and the zero tail both collapse to the
 * Reeb rotation at speed f(u).
 */
inline CVec radial_lift_flow(const RadialProfile& f, const CVec& x, double t) {
  const double u = chart_radius_sq(x);
  const double fv = f.eval(u), fd = f.deriv(u);
  const int last = int(x.size()) - 1;
  CVec out(x.size());
  out.head(last) = std::polar(1.0, (fv + (2.0 - u) * fd) * t) * x.head(last);
  out[last] = std::polar(1.0, (fv - u * fd) * t) * x[last];
  return out;
}

/// Flow of the quadratic Hamiltonian of Hermitian A: x -> e^{iAt} x.
class UnitaryFlow {
 public:
  explicit UnitaryFlow(const Eigen::MatrixXcd& A) : es_(A) {}

  CVec map(const CVec& x, double t) const {
    const auto& V = es_.eigenvectors();
    CVec y = V.adjoint() * x;
    for (int j = 0; j < y.size(); ++j) {
      y[j] *= std::polar(1.0, es_.eigenvalues()[j] * t);
    }
    return V * y;
  }

  Eigen::MatrixXcd matrix(double t) const {
    const auto& V = es_.eigenvectors();
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(V.rows(), V.cols());
    for (int j = 0; j < V.rows(); ++j) {
      D(j, j) = std::polar(1.0, es_.eigenvalues()[j] * t);
    }
    return V * D * V.adjoint();
  }

 private:
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_;
};

/**
 * Hermitian generator of the rotation by `angle` in the complex
 * (axis_a, axis_b) coordinate plane; its time-1 unitary maps the fiber
 * over chart center to the fiber over the axis_a hyperplane point.
 */
inline Eigen::MatrixXcd rotation_generator(int dim, int axis_a, int axis_b,
                                           double angle) {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dim);
  A(axis_a, axis_b) = Complex(angle, 0.0);
  A(axis_b, axis_a) = Complex(angle, 0.0);
  return A;
}

// ---------------------------------------------------------------------------
// RK4 integration with conformal factor
// ---------------------------------------------------------------------------

struct ContactIsotopySample {
  double total_time = 0.0;
  int steps = 0;                          ///< fine RK4 step count
  std::vector<double> times;              ///< stored grid, times[0] = 0
  std::vector<std::vector<CVec>> points;  ///< [seed][time index]
  std::vector<std::vector<double>> g;     ///< conformal factors, g[s][0] = 0
  double max_drift = 0.0;                 ///< max | |x| - 1 | before renorm
};

/**
 * Integrates the contact flow of h from the given seeds over [0, T] with
 * `steps` RK4 steps, storing every `store_every`-th state.  The conformal
 * factor rides along as an extra ODE component g' = dh_t(R).
 *
 * Requires steps >= 100 T / (2 pi); throws ResolutionTooCoarse otherwise.
 */
inline ContactIsotopySample integrate_contact_flow(
    const ContactHamiltonian& h, const std::vector<CVec>& seeds, double T,
    int steps, int store_every = 1) {
  if (steps < 100.0 * std::abs(T) / kTwoPi) {
    throw ResolutionTooCoarse("integrate_contact_flow: steps " +
                              std::to_string(steps) + " below resolution floor");
  }
  if (store_every < 1) store_every = 1;

  ContactIsotopySample out;
  out.total_time = T;
  out.steps = steps;
  const double dt = T / steps;
  for (int i = 0; i <= steps; i += store_every) {
    out.times.push_back(dt * i);
  }
  if ((steps % store_every) != 0) out.times.push_back(T);

  auto rhs = [&h](double t, const CVec& x, CVec& dx, double& dg) {
    dx = contact_vector_field(h, t, x);
    dg = real_inner(hamiltonian_gradient(h, t, x), j_mul(x));
  };

  out.points.resize(seeds.size());
  out.g.resize(seeds.size());
  for (size_t s = 0; s < seeds.size(); ++s) {
    CVec x = seeds[s] / seeds[s].norm();
    double g = 0.0;
    out.points[s].push_back(x);
    out.g[s].push_back(0.0);
    CVec k1, k2, k3, k4;
    double g1, g2, g3, g4;
    for (int i = 0; i < steps; ++i) {
      const double t = dt * i;
      rhs(t, x, k1, g1);
      rhs(t + 0.5 * dt, (x + 0.5 * dt * k1).eval(), k2, g2);
      rhs(t + 0.5 * dt, (x + 0.5 * dt * k2).eval(), k3, g3);
      rhs(t + dt, (x + dt * k3).eval(), k4, g4);
      x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      g += (dt / 6.0) * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
      const double nrm = x.norm();
      out.max_drift = std::max(out.max_drift, std::abs(nrm - 1.0));
      x /= nrm;
      if (((i + 1) % store_every) == 0 || i + 1 == steps) {
        if (out.points[s].size() < out.times.size()) {
          out.points[s].push_back(x);
          out.g[s].push_back(g);
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Time-1 maps with conformal factor
// ---------------------------------------------------------------------------

/// A contactomorphism presented as a point map plus its conformal factor.
struct ContactMap {
  std::function<CVec(const CVec&)> map;
  std::function<double(const CVec&)> conf;  ///< g with phi^* alpha = e^g alpha
  std::string name;
};

inline ContactMap identity_map(const std::string& name = "id") {
  return ContactMap{[](const CVec& x) { return x; },
                    [](const CVec&) { return 0.0; }, name};
}

inline ContactMap reeb_map(double s) {
  return ContactMap{[s](const CVec& x) { return reeb_flow(x, s); },
                    [](const CVec&) { return 0.0; },
                    "reeb(" + std::to_string(s) + ")"};
}

inline ContactMap radial_map(const RadialProfile& f, double T) {
  return ContactMap{[f, T](const CVec& x) { return radial_lift_flow(f, x, T); },
                    [](const CVec&) { return 0.0; },
                    "radial(r=" + std::to_string(f.radius()) + ")@" +
                        std::to_string(T)};
}

inline ContactMap unitary_map(const Eigen::MatrixXcd& U,
                              const std::string& name = "unitary") {
  return ContactMap{[U](const CVec& x) { return (U * x).eval(); },
                    [](const CVec&) { return 0.0; }, name};
}

/// Composition a o b with conformal factor g_a(b(x)) + g_b(x).
inline ContactMap compose(const ContactMap& a, const ContactMap& b) {
  const auto am = a.map, bm = b.map;
  const auto ac = a.conf, bc = b.conf;
  return ContactMap{[am, bm](const CVec& x) { return am(bm(x)); },
                    [ac, bc, bm](const CVec& x) { return ac(bm(x)) + bc(x); },
                    a.name + "*" + b.name};
}

/// Conjugation U phi U^{-1} by a strict (unitary) contactomorphism.
inline ContactMap conjugate_strict(const Eigen::MatrixXcd& U,
                                   const ContactMap& phi) {
  const Eigen::MatrixXcd Ui = U.adjoint();
  const auto m = phi.map;
  const auto c = phi.conf;
  return ContactMap{
      [U, Ui, m](const CVec& x) { return (U * m((Ui * x).eval())).eval(); },
      [Ui, c](const CVec& x) { return c((Ui * x).eval()); },
      "conj(" + phi.name + ")"};
}

/// Time-T map of h backed by on-demand RK4 (steps per unit time fixed).
inline ContactMap rk4_time_map(const ContactHamiltonian& h, double T,
                               int steps) {
  auto run = [h, T, steps](const CVec& x) {
    return integrate_contact_flow(h, {x}, T, steps, steps);
  };
  return ContactMap{
      [run](const CVec& x) { return run(x).points[0].back(); },
      [run](const CVec& x) { return run(x).g[0].back(); },
      h.name + "@rk4(" + std::to_string(T) + ")"};
}

// ---------------------------------------------------------------------------
// Base (chart) flows
// ---------------------------------------------------------------------------

/// RK4 flow of z' = i grad K(z) in chart coordinates C^n.
inline CVec chart_flow(const std::function<CVec(const CVec&)>& grad, CVec z,
                       double t, int steps) {
  const double dt = t / steps;
  for (int i = 0; i < steps; ++i) {
    const CVec k1 = j_mul(grad(z));
    const CVec k2 = j_mul(grad((z + 0.5 * dt * k1).eval()));
    const CVec k3 = j_mul(grad((z + 0.5 * dt * k2).eval()));
    const CVec k4 = j_mul(grad((z + dt * k3).eval()));
    z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return z;
}

/**
 * Time-T map of a circle-invariant chart Hamiltonian through its lift
 * structure: decompose x = e^{i theta} s(z) with s the chart section,
 * integrate the base flow z' = i grad K(z) together with the fiber phase
 *
 *   theta' = K(z) - (1/2) Im <z, z'>,
 *
 * which is the unique rate with alpha1(x') = K(z) along the lifted
 * trajectory.  Points outside the chart have K = 0 in all uses here and
 * are fixed.  Strict (conformal factor 0) since the lift is
 * circle-invariant; agreement with the direct sphere RK4 is a tested
 * invariant.
 */
inline ContactMap lifted_chart_time_map(
    const std::function<double(const CVec&)>& K,
    const std::function<CVec(const CVec&)>& K_grad, double T, int steps,
    const std::string& name) {
  auto map = [K, K_grad, T, steps](const CVec& x) {
    const int n = int(x.size()) - 1;
    const Complex last = x[n];
    if (std::abs(last) < 1e-12) return x;  // chart boundary: outside supports
    const Complex phase = std::conj(last) / std::abs(last);
    CVec z(n);
    z = std::sqrt(2.0) * (phase * x.head(n));
    double theta = std::arg(last);
    const double dt = T / steps;
    auto rhs = [&](const CVec& zz, CVec& dz, double& dth) {
      dz = j_mul(K_grad(zz));
      dth = K(zz) - 0.5 * hermitian(zz, dz).imag();
    };
    CVec k1, k2, k3, k4;
    double t1, t2, t3, t4;
    for (int i = 0; i < steps; ++i) {
      rhs(z, k1, t1);
      rhs((z + 0.5 * dt * k1).eval(), k2, t2);
      rhs((z + 0.5 * dt * k2).eval(), k3, t3);
      rhs((z + dt * k3).eval(), k4, t4);
      z += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      theta += (dt / 6.0) * (t1 + 2.0 * t2 + 2.0 * t3 + t4);
    }
    return reeb_flow(chart_section(z), theta).eval();
  };
  return ContactMap{map, [](const CVec&) { return 0.0; }, name};
}

/// FD gradient helper for scalar chart Hamiltonians.
inline std::function<CVec(const CVec&)> chart_fd_gradient(
    const std::function<double(const CVec&)>& K, double step = 1e-6) {
  return [K, step](const CVec& z) {
    CVec g = CVec::Zero(z.size());
    CVec zp = z, zm = z;
    for (int j = 0; j < z.size(); ++j) {
      for (int part = 0; part < 2; ++part) {
        const Complex d = (part == 0) ? Complex(step, 0) : Complex(0, step);
        zp[j] = z[j] + d;
        zm[j] = z[j] - d;
        const double diff = (K(zp) - K(zm)) / (2.0 * step);
        g[j] += (part == 0) ? Complex(diff, 0) : Complex(0, diff);
        zp[j] = z[j];
        zm[j] = z[j];
      }
    }
    return g;
  };
}

// ---------------------------------------------------------------------------
// Pullback diagnostics
// ---------------------------------------------------------------------------

/**
 * Finite-difference check of phi^* alpha1 = e^g alpha1 at (x, w):
 * returns | alpha1(d phi(w)) - e^{g(x)} alpha1(w) |.
 */
inline double pullback_conformal_residual(const ContactMap& phi, const CVec& x,
                                          const CVec& w, double fd = 1e-5) {
  auto at = [&](double s) {
    CVec p = x + s * w;
    return phi.map((p / p.norm()).eval());
  };
  const CVec dphi_w = (at(fd) - at(-fd)) / (2.0 * fd);
  const CVec y = phi.map(x);
  return std::abs(alpha1_raw(y, dphi_w) - std::exp(phi.conf(x)) * alpha1_raw(x, w));
}

}  // namespace contactlab
