#pragma once

/**
 * Radial profile functions f : [0, inf) -> [0, inf) used to generate the
 * slow radial Hamiltonians H(z) = f(|z|^2):
 *
 *   - f == pi r^2 - eps on [0, plateau_end]
 *   - supp f subset [0, r^2)
 *   - -pi < f' <= 0 everywhere
 *   - f' = 0 exactly on the plateau and on the zero tail
 *
 * The descent is a slope-capped ramp with quintic-smoothstep corners, so
 * plateau and tail values are exact and f is C^2 (in fact C^3).  All
 * construction margins scale with the slack eps/pi: the descent must fit a
 * drop of pi r^2 - eps at slope above -pi inside a window of length r^2,
 * which leaves exactly eps/pi of width to spend.
 */

#include "contactlab/core.hpp"

namespace contactlab {

/// Ascending quintic smoothstep: S(0)=0, S(1)=1, S'=S''=0 at both ends.
inline double smoothstep5(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

inline double smoothstep5_deriv(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double a = u * (1.0 - u);
  return 30.0 * a * a;
}

/// Antiderivative of smoothstep5 with I(0) = 0; I(1) = 1/2.
inline double smoothstep5_integral(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 0.5 + (u - 1.0);
  const double u4 = u * u * u * u;
  return u4 * (2.5 + u * (-3.0 + u));
}

class RadialProfile {
 public:
  /**
   * Builds the profile for radius r and defect 0 < eps < pi r^2.
   *
   * Throws InfeasibleProfile when the slack eps/pi is too small to leave an
   * admissible slope strictly above -pi (enforced ceiling -pi + 1e-6).
   */
  RadialProfile(double r, double eps) : r_(r), eps_(eps) {
    if (!(r > 0.0)) throw InfeasibleProfile("radius must be positive");
    if (!(eps > 0.0 && eps < kPi * r * r)) {
      throw InfeasibleProfile("need 0 < eps < pi r^2");
    }
    height_ = kPi * r * r - eps;
    const double budget = eps / kPi;  // width slack beyond height/pi
    plateau_end_ = 0.2 * budget;
    support_end_ = r * r - 0.1 * budget;
    corner_ = 0.2 * budget;
    const double effective = support_end_ - plateau_end_ - corner_;
    slope_ = height_ / effective;
    if (!(slope_ <= kPi - 1e-6)) {
      throw InfeasibleProfile("no admissible slope above -pi for eps = " +
                              std::to_string(eps));
    }
  }

  double eval(double t) const {
    const double a = plateau_end_, b = support_end_, c = corner_;
    if (t <= a) return height_;
    if (t >= b) return 0.0;
    if (t <= a + c) {
      return height_ - slope_ * c * smoothstep5_integral((t - a) / c);
    }
    if (t >= b - c) {
      return slope_ * c * smoothstep5_integral((b - t) / c);
    }
    return height_ - slope_ * (t - a - 0.5 * c);
  }

  double deriv(double t) const {
    const double a = plateau_end_, b = support_end_, c = corner_;
    if (t <= a || t >= b) return 0.0;
    if (t <= a + c) return -slope_ * smoothstep5((t - a) / c);
    if (t >= b - c) return -slope_ * smoothstep5((b - t) / c);
    return -slope_;
  }

  /// Pointwise-scaled profile lam*f, 0 < lam <= 1; shares the geometry, so
  /// scaled families are pointwise ordered (used by the monotonicity suite).
  RadialProfile scaled(double lam) const {
    if (!(lam > 0.0 && lam <= 1.0)) {
      throw ConstraintViolation("RadialProfile::scaled: need 0 < lam <= 1");
    }
    RadialProfile g = *this;
    g.height_ *= lam;
    g.slope_ *= lam;
    g.eps_ = kPi * r_ * r_ - g.height_;
    return g;
  }

  double radius() const { return r_; }
  double eps() const { return eps_; }
  double plateau_value() const { return height_; }
  double plateau_end() const { return plateau_end_; }
  double support_end() const { return support_end_; }
  double corner_width() const { return corner_; }
  double max_slope() const { return slope_; }

 private:
  double r_, eps_;
  double height_;       // pi r^2 - eps
  double plateau_end_;  // f == height on [0, plateau_end]
  double support_end_;  // f == 0 on [support_end, inf), support_end < r^2
  double corner_;       // smoothstep corner width of the descent
  double slope_;        // maximal descent slope (positive number)
};

inline RadialProfile make_profile(double r, double eps) {
  return RadialProfile(r, eps);
}

/**
 * Profiles for several eps over a shared geometry: the steepest profile
 * (smallest eps) is built directly and the others are pointwise scalings,
 * so eps1 > eps2 implies f_{eps1} <= f_{eps2} everywhere.
 */
inline std::vector<RadialProfile> make_profile_family(
    double r, const std::vector<double>& eps_grid) {
  double eps_min = std::numeric_limits<double>::infinity();
  for (double e : eps_grid) eps_min = std::min(eps_min, e);
  const RadialProfile base(r, eps_min);
  std::vector<RadialProfile> out;
  out.reserve(eps_grid.size());
  const double hmax = base.plateau_value();
  for (double e : eps_grid) {
    out.push_back(base.scaled((kPi * r * r - e) / hmax));
  }
  return out;
}

inline double profile_eval(const RadialProfile& f, double s) { return f.eval(s); }
inline double profile_deriv(const RadialProfile& f, double s) { return f.deriv(s); }

/**
 * Radial cutoff on R^{2n}: 1 on the ball of radius inner, 0 outside the
 * ball of radius outer, smooth (quintic in |x|^2) in between.
 */
class RadialCutoff {
 public:
  RadialCutoff(double inner_radius, double outer_radius)
      : in2_(inner_radius * inner_radius), out2_(outer_radius * outer_radius) {
    if (!(0.0 < inner_radius && inner_radius < outer_radius)) {
      throw ConstraintViolation("RadialCutoff: need 0 < inner < outer");
    }
  }

  /// Value as a function of the squared norm rho2 = |x|^2.
  double value_r2(double rho2) const {
    return 1.0 - smoothstep5((rho2 - in2_) / (out2_ - in2_));
  }

  /// d/d(rho2) of value_r2.
  double deriv_r2(double rho2) const {
    return -smoothstep5_deriv((rho2 - in2_) / (out2_ - in2_)) / (out2_ - in2_);
  }

  double inner_radius() const { return std::sqrt(in2_); }
  double outer_radius() const { return std::sqrt(out2_); }

 private:
  double in2_, out2_;
};

inline RadialCutoff make_cutoff(double inner_radius, double outer_radius) {
  return RadialCutoff(inner_radius, outer_radius);
}

}  // namespace contactlab
