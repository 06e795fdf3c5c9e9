#pragma once

/**
 * Compactly supported Hamiltonians of R^2 whose time-1 flow displaces a
 * disk B^2(r).  The baseline is a cutoff translation: it displaces with
 * energy ~ 4 r^2 (1 + margins), larger than the optimal ~ pi r^2, but it
 * is fully explicit and its displacement property is verified by flowing
 * sample points.  Tighter displacers can be plugged in from a JSON
 * definition (piecewise polynomial pieces, or metadata-only "declared"
 * entries certified externally).
 */

#include "contactlab/profiles.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>

namespace contactlab {

/// 1-d plateau window: 1 on [lo, hi], quintic roll-off to 0 over width w.
struct PlateauWindow {
  double lo, hi, w;

  double value(double s) const {
    if (s < lo) return smoothstep5((s - (lo - w)) / w);
    if (s > hi) return smoothstep5(((hi + w) - s) / w);
    return 1.0;
  }
  double deriv(double s) const {
    if (s < lo) return smoothstep5_deriv((s - (lo - w)) / w) / w;
    if (s > hi) return -smoothstep5_deriv(((hi + w) - s) / w) / w;
    return 0.0;
  }
};

struct DisplacementHamiltonian {
  std::function<double(double, double)> eval;                 // H(x, y)
  std::function<Eigen::Vector2d(double, double)> grad;        // dH
  double support_radius = 0.0;
  double displaced_radius = 0.0;  // time-1 flow displaces B^2(displaced_radius)
  double sweep_radius = 0.0;      // hull radius of the displaced disk's orbit
  double energy = 0.0;            // vmax - vmin (measured unless declared)
  double vmin = 0.0, vmax = 0.0;  // range of H
  std::string kind;
  bool declared_only = false;  // metadata-only: displacement certified externally

  bool evaluable() const { return static_cast<bool>(eval); }
};

/// Hamiltonian vector field of H w.r.t. omega0 = dx ^ dy: X_H = (-H_y, H_x).
inline Eigen::Vector2d ham_vector_field_r2(const DisplacementHamiltonian& d,
                                           double x, double y) {
  const Eigen::Vector2d g = d.grad(x, y);
  return {-g[1], g[0]};
}

/// RK4 flow of X_H in R^2.
inline Eigen::Vector2d flow_r2(const DisplacementHamiltonian& d,
                               Eigen::Vector2d p, double t, int steps = 800) {
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    const Eigen::Vector2d k1 = ham_vector_field_r2(d, p[0], p[1]);
    const Eigen::Vector2d p2 = p + 0.5 * h * k1;
    const Eigen::Vector2d k2 = ham_vector_field_r2(d, p2[0], p2[1]);
    const Eigen::Vector2d p3 = p + 0.5 * h * k2;
    const Eigen::Vector2d k3 = ham_vector_field_r2(d, p3[0], p3[1]);
    const Eigen::Vector2d p4 = p + h * k3;
    const Eigen::Vector2d k4 = ham_vector_field_r2(d, p4[0], p4[1]);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return p;
}

/**
 * Baseline displacer: H(x,y) = -T y X(x) Y(y) with T = 2r + margin and
 * plateau windows X, Y equal to 1 on a padded hull of the swept region
 * [-r, r+T] x [-r, r].  Inside the plateau the flow is the exact
 * translation by (T, 0), so B^2(r) is displaced with margin `margin`.
 */
inline DisplacementHamiltonian make_translation_displacer(double r,
                                                          double margin) {
  if (!(r > 0.0 && margin > 0.0)) {
    throw ConstraintViolation("make_translation_displacer: r, margin > 0");
  }
  const double T = 2.0 * r + margin;
  const double pad = 0.1 * r;
  const double collar = 0.2 * r;
  const PlateauWindow X{-r - pad, r + T + pad, collar};
  const PlateauWindow Y{-r - pad, r + pad, collar};

  DisplacementHamiltonian d;
  d.kind = "translation";
  d.displaced_radius = r;
  d.eval = [T, X, Y](double x, double y) {
    return -T * y * X.value(x) * Y.value(y);
  };
  d.grad = [T, X, Y](double x, double y) {
    const double xv = X.value(x), yv = Y.value(y);
    return Eigen::Vector2d{-T * y * X.deriv(x) * yv,
                           -T * xv * (yv + y * Y.deriv(y))};
  };
  const double xmax = r + T + pad + collar;
  const double ymax = r + pad + collar;
  d.support_radius = std::hypot(std::max(xmax, r + pad + collar), ymax);
  // Trajectories from B^2(r) live in the exact-translation plateau, so the
  // swept hull is the translated-disk envelope, not the whole support.
  d.sweep_radius = std::hypot(r + T, r);

  // H is odd in y up to the X window, so energy = 2 max_y (T y Y(y)).
  double peak = 0.0;
  const int ng = 20000;
  for (int i = 0; i <= ng; ++i) {
    const double y = ymax * i / ng;
    peak = std::max(peak, T * y * Y.value(y));
  }
  d.vmax = peak;
  d.vmin = -peak;
  d.energy = 2.0 * peak;
  return d;
}

/// Conjugation by the dilation z -> rho z: H_rho = rho^2 H(./rho).
inline DisplacementHamiltonian rescale_displacer(
    const DisplacementHamiltonian& d, double rho) {
  if (!(rho > 0.0)) throw ConstraintViolation("rescale_displacer: rho > 0");
  if (!d.evaluable()) {
    throw ConstraintViolation("rescale_displacer: displacer is metadata-only");
  }
  DisplacementHamiltonian out;
  out.kind = d.kind + "*scaled";
  const auto eval = d.eval;
  const auto grad = d.grad;
  out.eval = [eval, rho](double x, double y) {
    return rho * rho * eval(x / rho, y / rho);
  };
  out.grad = [grad, rho](double x, double y) {
    return (rho * grad(x / rho, y / rho)).eval();
  };
  out.support_radius = rho * d.support_radius;
  out.sweep_radius = rho * d.sweep_radius;
  out.displaced_radius = rho * d.displaced_radius;
  out.energy = rho * rho * d.energy;
  out.vmin = rho * rho * d.vmin;
  out.vmax = rho * rho * d.vmax;
  return out;
}

// ---------------------------------------------------------------------------
// JSON-defined displacers
// ---------------------------------------------------------------------------

/**
 * Loads a displacer from a JSON definition.  Two kinds are accepted:
 *
 *  {"kind": "piecewise_polynomial", "displaced_radius": ..,
 *   "support_radius": ..,
 *   "pieces": [{"x":[x0,x1], "y":[y0,y1], "coeffs": [[c00,c01,..],..]}, ..]}
 *
 * with H(x,y) = sum_ij c_ij x^i y^j on each piece (first matching piece
 * wins, 0 outside all pieces), and
 *
 *  {"kind": "declared", "displaced_radius": .., "support_radius": ..,
 *   "energy": .., "certified": true}
 *
 * for metadata-only displacers whose displacement property was certified
 * outside this library (e.g. an optimal-energy construction); these cannot
 * be flow-verified here and are labeled as declared in every report.
 */
inline DisplacementHamiltonian displacer_from_json(const nlohmann::json& j) {
  DisplacementHamiltonian d;
  const std::string kind = j.at("kind").get<std::string>();
  d.displaced_radius = j.at("displaced_radius").get<double>();
  d.support_radius = j.at("support_radius").get<double>();
  d.sweep_radius = j.value("sweep_radius", d.support_radius);
  if (kind == "declared") {
    if (!j.value("certified", false)) {
      throw ConfigError("declared displacer must set certified: true");
    }
    d.kind = "declared";
    d.declared_only = true;
    d.energy = j.at("energy").get<double>();
    d.vmin = j.value("min", 0.0);
    d.vmax = j.value("max", d.energy + d.vmin);
    return d;
  }
  if (kind != "piecewise_polynomial") {
    throw ConfigError("unknown displacer kind: " + kind);
  }
  struct Piece {
    double x0, x1, y0, y1;
    std::vector<std::vector<double>> c;
  };
  auto pieces = std::make_shared<std::vector<Piece>>();
  for (const auto& pj : j.at("pieces")) {
    Piece p;
    p.x0 = pj.at("x")[0].get<double>();
    p.x1 = pj.at("x")[1].get<double>();
    p.y0 = pj.at("y")[0].get<double>();
    p.y1 = pj.at("y")[1].get<double>();
    p.c = pj.at("coeffs").get<std::vector<std::vector<double>>>();
    pieces->push_back(std::move(p));
  }
  auto poly = [](const std::vector<std::vector<double>>& c, double x,
                 double y) {
    double acc = 0.0, xi = 1.0;
    for (const auto& row : c) {
      double yj = 1.0, s = 0.0;
      for (double cij : row) {
        s += cij * yj;
        yj *= y;
      }
      acc += xi * s;
      xi *= x;
    }
    return acc;
  };
  d.kind = "piecewise_polynomial";
  d.eval = [pieces, poly](double x, double y) {
    for (const auto& p : *pieces) {
      if (x >= p.x0 && x <= p.x1 && y >= p.y0 && y <= p.y1) {
        return poly(p.c, x, y);
      }
    }
    return 0.0;
  };
  const auto eval = d.eval;
  d.grad = [eval](double x, double y) {
    const double h = 1e-6;
    return Eigen::Vector2d{(eval(x + h, y) - eval(x - h, y)) / (2 * h),
                           (eval(x, y + h) - eval(x, y - h)) / (2 * h)};
  };
  // Measured energy over the support square.
  double hi = -std::numeric_limits<double>::infinity(), lo = -hi;
  const int ng = 400;
  for (int i = 0; i <= ng; ++i) {
    for (int k = 0; k <= ng; ++k) {
      const double x = d.support_radius * (2.0 * i / ng - 1.0);
      const double y = d.support_radius * (2.0 * k / ng - 1.0);
      const double v = d.eval(x, y);
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
  }
  d.vmin = std::min(lo, 0.0);
  d.vmax = std::max(hi, 0.0);
  d.energy = d.vmax - d.vmin;
  return d;
}

inline DisplacementHamiltonian load_displacer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open displacer file: " + path);
  nlohmann::json j;
  in >> j;
  return displacer_from_json(j);
}

}  // namespace contactlab
