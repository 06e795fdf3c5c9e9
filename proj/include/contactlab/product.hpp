#pragma once

/**
 * The contact product (M x M x R, beta = pr2* alpha - e^theta pr1* alpha)
 * of the sphere with itself, graphs of contactomorphisms and the
 * graph-level transport of spectra and energy bounds.
 *
 * The graph of an isotopy phi_t with conformal factor g_t is
 * Phi_t(x1, x2, theta) = (x1, phi_t(x2), theta + g_t(x2)); it maps the
 * diagonal Legendrian Delta = {(x, x, 0)} to a Legendrian encoding phi_t,
 * and the product Reeb flow moves only the second factor, so Legendrian
 * spectra against the shifted diagonal reproduce base spectra.
 */

#include "contactlab/selector.hpp"
#include "contactlab/spectrum.hpp"

namespace contactlab {

struct ProductPoint {
  CVec x1, x2;
  double theta = 0.0;
};

struct ProductTangent {
  CVec w1, w2;
  double wtheta = 0.0;
};

/// beta at p on w: alpha(w2) - e^theta alpha(w1); checks factor tangency.
inline double beta_eval(const ProductPoint& p, const ProductTangent& w,
                        double tol = kGeomTol) {
  if (std::abs(real_inner(p.x1, w.w1)) > tol * std::max(1.0, w.w1.norm()) ||
      std::abs(real_inner(p.x2, w.w2)) > tol * std::max(1.0, w.w2.norm())) {
    throw TangencyViolation("beta_eval: factor components not tangent");
  }
  return alpha1_raw(p.x2, w.w2) - std::exp(p.theta) * alpha1_raw(p.x1, w.w1);
}

/// beta on ambient product vectors (no tangency check); used by FD helpers.
inline double beta_raw(const ProductPoint& p, const ProductTangent& w) {
  return alpha1_raw(p.x2, w.w2) - std::exp(p.theta) * alpha1_raw(p.x1, w.w1);
}

/// The product Reeb field (0, i x2, 0).
inline ProductTangent product_reeb_field(const ProductPoint& p) {
  return {CVec::Zero(p.x1.size()), j_mul(p.x2), 0.0};
}

/// Product Reeb flow: (x1, e^{it} x2, theta).
inline ProductPoint product_reeb_flow(const ProductPoint& p, double t) {
  return {p.x1, reeb_flow(p.x2, t), p.theta};
}

/**
 * d(beta) evaluated on constant ambient extensions of u, v at p by central
 * finite differences (constant extensions commute, so no bracket term).
 */
inline double dbeta_fd(const ProductPoint& p, const ProductTangent& u,
                       const ProductTangent& v, double h = 1e-6) {
  auto shift = [](const ProductPoint& q, const ProductTangent& w, double s) {
    return ProductPoint{q.x1 + s * w.w1, q.x2 + s * w.w2, q.theta + s * w.wtheta};
  };
  const double dv =
      (beta_raw(shift(p, u, h), v) - beta_raw(shift(p, u, -h), v)) / (2.0 * h);
  const double du =
      (beta_raw(shift(p, v, h), u) - beta_raw(shift(p, v, -h), u)) / (2.0 * h);
  return dv - du;
}

// ---------------------------------------------------------------------------
// Graphs of isotopies
// ---------------------------------------------------------------------------

/// A contact isotopy presented as callable flow maps with conformal factor.
struct ContactFlowFamily {
  std::function<CVec(const CVec&, double)> map;    ///< phi_t(x)
  std::function<double(const CVec&, double)> conf; ///< g_t(x)
  std::string name;
};

inline ContactFlowFamily radial_family(const RadialProfile& f, double T = 1.0) {
  return {[f, T](const CVec& x, double t) { return radial_lift_flow(f, x, t * T); },
          [](const CVec&, double) { return 0.0; },
          "radial_family(r=" + std::to_string(f.radius()) + ")"};
}

inline ContactFlowFamily reeb_family(double speed) {
  return {[speed](const CVec& x, double t) { return reeb_flow(x, speed * t); },
          [](const CVec&, double) { return 0.0; },
          "reeb_family(" + std::to_string(speed) + ")"};
}

/// RK4-backed family of a contact Hamiltonian (on-demand integration).
inline ContactFlowFamily rk4_family(const ContactHamiltonian& h, double T,
                                    int steps) {
  auto run = [h, T, steps](const CVec& x, double t) {
    const double time = t * T;
    const int st = std::max(8, int(steps * std::abs(t)) + 1);
    return integrate_contact_flow(h, {x}, time, st, st);
  };
  return {[run](const CVec& x, double t) { return run(x, t).points[0].back(); },
          [run](const CVec& x, double t) { return run(x, t).g[0].back(); },
          h.name + "@family"};
}

struct GraphIsotopy {
  ContactFlowFamily base;

  ProductPoint at(const ProductPoint& p, double t) const {
    if (!base.conf) throw MissingConformalFactor(base.name);
    return {p.x1, base.map(p.x2, t), p.theta + base.conf(p.x2, t)};
  }

  /// Time-1 contact map of the base isotopy.
  ContactMap time1() const {
    const auto m = base.map;
    const auto c = base.conf;
    return ContactMap{[m](const CVec& x) { return m(x, 1.0); },
                      [c](const CVec& x) { return c(x, 1.0); },
                      base.name + "@1"};
  }
};

inline GraphIsotopy graph_of(const ContactFlowFamily& family) {
  if (!family.conf) throw MissingConformalFactor(family.name);
  return GraphIsotopy{family};
}

/**
 * Legendrian check of Phi_t(Delta): beta must vanish on finite-difference
 * tangents of s -> Phi_t((x + s v)^, (x + s v)^, 0).  Returns the max
 * |beta| over the sampled directions.
 */
inline double legendrian_residual(const GraphIsotopy& graph, const CVec& x,
                                  double t, Rng& rng, int directions = 6,
                                  double fd = 1e-6) {
  double worst = 0.0;
  const ProductPoint base = graph.at({x, x, 0.0}, t);
  for (int d = 0; d < directions; ++d) {
    const CVec v = random_tangent(rng, x);
    auto curve = [&](double s) {
      CVec xs = x + s * v;
      xs /= xs.norm();
      return graph.at({xs, xs, 0.0}, t);
    };
    const ProductPoint pp = curve(fd), pm = curve(-fd);
    const ProductTangent w{(pp.x1 - pm.x1) / (2.0 * fd),
                           (pp.x2 - pm.x2) / (2.0 * fd),
                           (pp.theta - pm.theta) / (2.0 * fd)};
    worst = std::max(worst, std::abs(beta_raw(base, w)));
  }
  return worst;
}

/**
 * Graph energy identity: beta(d/dt Phi_t) = alpha(d/dt phi_t(x2)) = h
 * along the flow.  Evaluates the left side by a 4th-order finite
 * difference in t over a stored isotopy sample and compares with h; the
 * max discrepancy over interior grid points and seeds is returned.
 */
inline double check_ham_graph(const ContactIsotopySample& sample,
                              const ContactHamiltonian& h) {
  double worst = 0.0;
  const size_t m = sample.times.size();
  if (m < 5) throw ResolutionTooCoarse("check_ham_graph: need >= 5 stored times");
  for (size_t s = 0; s < sample.points.size(); ++s) {
    for (size_t i = 2; i + 2 < m; ++i) {
      const double dt = sample.times[i + 1] - sample.times[i];
      const CVec dphi = (-sample.points[s][i + 2] + 8.0 * sample.points[s][i + 1] -
                         8.0 * sample.points[s][i - 1] + sample.points[s][i - 2]) /
                        (12.0 * dt);
      const double dg = (-sample.g[s][i + 2] + 8.0 * sample.g[s][i + 1] -
                         8.0 * sample.g[s][i - 1] + sample.g[s][i - 2]) /
                        (12.0 * dt);
      // beta of (0, dphi, dg) at the graph point: only the second factor
      // contributes.
      const ProductPoint p{sample.points[s][0], sample.points[s][i],
                           sample.g[s][i]};
      const double lhs = beta_raw(p, {CVec::Zero(p.x1.size()), dphi, dg});
      const double rhs = h.value(sample.times[i], sample.points[s][i]);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

/**
 * Legendrian spectrum of (Phi(Delta), Delta) against the product Reeb
 * shift: minimizes the product-space distance between
 * (x, e^{it} x, 0) and (x, phi(x), g(x)) over (x, t).  This reduces to the
 * base translated-point residual in the L2 product metric and must
 * reproduce the base spectrum.
 */
inline SpectrumSet spectrum_via_graph(const GraphIsotopy& graph, int complex_dim,
                                      double window_lo, double window_hi,
                                      SpectrumGrid cfg = {},
                                      const std::vector<CVec>& extra_seeds = {}) {
  cfg.product_metric = true;
  return spectrum_numeric(graph.time1(), complex_dim, window_lo, window_hi, cfg,
                          extra_seeds);
}

/**
 * Order-selector energy bounds through graph-side quantities: the interval
 * (T min h, T max h) with the beta-route values cross-checked against the
 * alpha-route along sampled trajectories; returns the interval and writes
 * the max route discrepancy to *route_residual when given.
 */
inline std::pair<double, double> order_selector_bounds(
    const GraphIsotopy& graph, const ContactHamiltonian& h, double T,
    const std::vector<CVec>& probes, double* route_residual = nullptr,
    double fd = 1e-5) {
  double worst = 0.0;
  for (const CVec& x : probes) {
    for (double t : {0.1, 0.45, 0.8}) {
      const ProductPoint p0{x, x, 0.0};
      const ProductPoint pp = graph.at(p0, t + fd), pm = graph.at(p0, t - fd);
      const ProductTangent w{(pp.x1 - pm.x1) / (2.0 * fd),
                             (pp.x2 - pm.x2) / (2.0 * fd),
                             (pp.theta - pm.theta) / (2.0 * fd)};
      const ProductPoint pt = graph.at(p0, t);
      const double beta_rate = beta_raw(pt, w) / T;
      const double alpha_rate = h.value(t * T, pt.x2);
      worst = std::max(worst, std::abs(beta_rate - alpha_rate));
    }
  }
  if (route_residual) *route_residual = worst;
  return selector_energy_bounds(h, T);
}

/**
 * Conformal factor of the graph map by finite differences: residual of
 * Phi^* beta = e^{G} beta with G(x1, x2, theta) = g(x2).  Strict base maps
 * must transport to strict graph maps.
 */
inline double graph_pullback_residual(const GraphIsotopy& graph, const CVec& x1,
                                      const CVec& x2, double theta, double t,
                                      Rng& rng, double fd = 1e-6) {
  const ProductPoint p{x1, x2, theta};
  const ProductTangent w{random_tangent(rng, x1), random_tangent(rng, x2), 0.4};
  auto curve = [&](double s) {
    CVec a = x1 + s * w.w1;
    CVec b = x2 + s * w.w2;
    a /= a.norm();
    b /= b.norm();
    return graph.at({a, b, theta + s * w.wtheta}, t);
  };
  const ProductPoint pp = curve(fd), pm = curve(-fd);
  const ProductTangent dw{(pp.x1 - pm.x1) / (2.0 * fd),
                          (pp.x2 - pm.x2) / (2.0 * fd),
                          (pp.theta - pm.theta) / (2.0 * fd)};
  const ProductPoint image = graph.at(p, t);
  const double lhs = beta_raw(image, dw);
  const double rhs = std::exp(graph.base.conf(x2, t)) * beta_raw(p, w);
  return std::abs(lhs - rhs);
}

}  // namespace contactlab
