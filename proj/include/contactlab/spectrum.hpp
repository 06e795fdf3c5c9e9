#pragma once

/**
 * Translated-point detection and spectra.
 *
 * A point x is an alpha1-translated point of phi with shift t when
 * reeb_flow(phi(x), -t) = x and the conformal factor of phi vanishes at x;
 * the spectrum is the set of such shifts.  All spectra are computed
 * upstairs on the sphere, where the residual in t has the closed form
 *
 *   | e^{-it} phi(x) - x |^2 = 2 - 2 rho cos(theta - t),
 *   rho e^{i theta} = <x, phi(x)>,
 *
 * with a single minimum per 2 pi window at t = theta; the time scan of the
 * coarse grid therefore reduces to one inner-product per sample point.
 * Detected minima are refined by damped Gauss-Newton over the sphere
 * coordinates (the optimal shift is recomputed in closed form each step).
 */

#include "contactlab/flow.hpp"

#include <algorithm>
#include <optional>

namespace contactlab {

// ---------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------

/// Scalar residual | reeb_flow(phi(x), -t) - x | + |g(x)|.
inline double translated_point_residual(const ContactMap& phi, const CVec& x,
                                        double t) {
  return (reeb_flow(phi.map(x), -t) - x).norm() + std::abs(phi.conf(x));
}

/// Discriminant test: fixed point with vanishing conformal factor.
inline bool is_discriminant_point(const ContactMap& phi, const CVec& x,
                                  double tol) {
  return (phi.map(x) - x).norm() <= tol && std::abs(phi.conf(x)) <= tol;
}

/// Optimal shift and minimal point-residual over the Reeb circle of x.
inline std::pair<double, double> best_shift(const ContactMap& phi,
                                            const CVec& x) {
  const Complex c = hermitian(x, phi.map(x));
  const double rho = std::abs(c);
  const double t = (rho > 0.0) ? std::arg(c) : 0.0;
  return {t, std::sqrt(std::max(0.0, 2.0 - 2.0 * rho))};
}

// ---------------------------------------------------------------------------
// Spectrum sets
// ---------------------------------------------------------------------------

/// Affine branch of a spectrum family: T -> slope * T + 2 pi m, m in Z.
struct SpectrumBranch {
  double slope = 0.0;
  double validity_lo = 0.0, validity_hi = 1.0;  ///< parameter interval
};

struct IsolatedValue {
  double t = 0.0;
  double residual = 0.0;
  CVec witness;
};

struct SpectrumSet {
  double window_lo = 0.0, window_hi = kTwoPi;
  std::vector<SpectrumBranch> branches;    ///< analytic part
  std::vector<IsolatedValue> values;       ///< numeric part (deduplicated)
  std::vector<IsolatedValue> failures;     ///< NoConvergence entries

  /// All branch instances slope*T + 2 pi m inside [window_lo, window_hi).
  std::vector<double> branch_values_at(double T) const {
    std::vector<double> out;
    for (const auto& b : branches) {
      const double base = b.slope * T;
      const double m0 = std::ceil((window_lo - base) / kTwoPi - 1e-12);
      for (double m = m0; base + kTwoPi * m < window_hi - 1e-12; m += 1.0) {
        out.push_back(base + kTwoPi * m);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<double> numeric_values() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(v.t);
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// Distance of two shifts modulo 2 pi.
inline double mod2pi_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

/// One-sided match: max over a in A of min over b in B of |a - b| mod 2pi.
inline double directed_match_distance(const std::vector<double>& A,
                                      const std::vector<double>& B) {
  double worst = 0.0;
  for (double a : A) {
    double best = std::numeric_limits<double>::infinity();
    for (double b : B) best = std::min(best, mod2pi_distance(a, b));
    worst = std::max(worst, best);
  }
  return worst;
}

/**
 * Analytic spectrum of the time-T radial-lift flow: exactly the branch of
 * slope pi r^2 - eps (the plateau speed) and the zero branch, each with
 * its 2 pi Z offsets.  Valid as the full sphere spectrum for r <= sqrt 2,
 * where the profile support fits the chart.
 */
inline SpectrumSet spectrum_radial(const RadialProfile& f, double T,
                                   double window_lo = 0.0,
                                   double window_hi = kTwoPi) {
  SpectrumSet s;
  s.window_lo = window_lo;
  s.window_hi = window_hi;
  s.branches.push_back({f.plateau_value(), 0.0, 1.0});
  s.branches.push_back({0.0, 0.0, 1.0});
  for (double v : s.branch_values_at(T)) {
    if (!s.values.empty() && std::abs(s.values.back().t - v) < 1e-12) continue;
    s.values.push_back({v, 0.0, CVec()});
  }
  return s;
}

// ---------------------------------------------------------------------------
// Numeric spectrum
// ---------------------------------------------------------------------------

struct SpectrumGrid {
  int num_points = 2000;        ///< sphere sample count
  double scan_threshold = 1e-2; ///< residual gate for refinement candidates
  int speculative = 64;         ///< extra best-residual starts beyond the gate
  int max_iter = 50;            ///< Gauss-Newton iteration cap
  double residual_target = 1e-7;
  double dedup_tol = 1e-5;
  uint64_t seed = 2024;
  bool product_metric = false;  ///< L2 product-space residual (graph route)
};

namespace detail {

inline double scalar_residual(const ContactMap& phi, const CVec& x,
                              bool product_metric) {
  const auto [t, pr] = best_shift(phi, x);
  const double g = std::abs(phi.conf(x));
  return product_metric ? std::hypot(pr, g) : pr + g;
}

/// Damped Gauss-Newton on the sphere coordinates; the shift is implicit.
struct RefineResult {
  bool converged = false;
  CVec x;
  double t = 0.0;
  double residual = 0.0;
};

inline RefineResult refine_translated_point(const ContactMap& phi, CVec x,
                                            const SpectrumGrid& cfg) {
  const int dim = int(x.size());
  const int m = 2 * dim + 1;  // Re/Im point mismatch + conformal factor
  auto vec_residual = [&](const CVec& p, Eigen::VectorXd& v) {
    const CVec xn = p / p.norm();
    const auto [t, pr] = best_shift(phi, xn);
    const CVec mis = reeb_flow(phi.map(xn), -t) - xn;
    for (int j = 0; j < dim; ++j) {
      v[2 * j] = mis[j].real();
      v[2 * j + 1] = mis[j].imag();
    }
    v[m - 1] = phi.conf(xn);
    return t;
  };

  Eigen::VectorXd v(m), v_try(m);
  double t = vec_residual(x, v);
  double lambda = 1e-3;
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    const double res = cfg.product_metric
                           ? v.norm()
                           : v.head(m - 1).norm() + std::abs(v[m - 1]);
    if (res <= cfg.residual_target) {
      return {true, x / x.norm(), t, res};
    }
    Eigen::MatrixXd J(m, 2 * dim);
    const double h = 1e-7;
    Eigen::VectorXd vp(m), vm(m);
    CVec xp = x, xm = x;
    for (int j = 0; j < dim; ++j) {
      for (int part = 0; part < 2; ++part) {
        const Complex d = (part == 0) ? Complex(h, 0) : Complex(0, h);
        xp[j] = x[j] + d;
        xm[j] = x[j] - d;
        vec_residual(xp, vp);
        vec_residual(xm, vm);
        J.col(2 * j + part) = (vp - vm) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
      }
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd Jtv = J.transpose() * v;
    bool stepped = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal().array() += lambda;
      const Eigen::VectorXd delta = A.ldlt().solve(-Jtv);
      CVec x_try = x;
      for (int j = 0; j < dim; ++j) {
        x_try[j] += Complex(delta[2 * j], delta[2 * j + 1]);
      }
      const double t_try = vec_residual(x_try, v_try);
      if (v_try.squaredNorm() < v.squaredNorm()) {
        x = x_try;
        v = v_try;
        t = t_try;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!stepped) break;
  }
  const double res = cfg.product_metric
                         ? v.norm()
                         : v.head(m - 1).norm() + std::abs(v[m - 1]);
  return {res <= cfg.residual_target, x / x.norm(), t, res};
}

}  // namespace detail

/**
 * Numeric spectrum of a time-1 map over the given window: coarse scan over
 * quasi-random sphere samples (plus coordinate fibers and caller-supplied
 * seeds), Gauss-Newton refinement of scan minima, dedup of converged
 * shifts.  Candidates below the scan gate that fail to converge are listed
 * in `failures`, never dropped silently.
 */
inline SpectrumSet spectrum_numeric(const ContactMap& phi, int complex_dim,
                                    double window_lo, double window_hi,
                                    const SpectrumGrid& cfg = {},
                                    const std::vector<CVec>& extra_seeds = {}) {
  SpectrumSet out;
  out.window_lo = window_lo;
  out.window_hi = window_hi;

  Rng rng(cfg.seed);
  std::vector<CVec> seeds;
  seeds.reserve(cfg.num_points + complex_dim + extra_seeds.size());
  for (int i = 0; i < cfg.num_points; ++i) {
    seeds.push_back(random_sphere_point(rng, complex_dim));
  }
  for (int j = 0; j < complex_dim; ++j) {
    CVec e = CVec::Zero(complex_dim);
    e[j] = 1.0;
    seeds.push_back(e);
  }
  for (const auto& s : extra_seeds) seeds.push_back(s / s.norm());

  std::vector<std::pair<double, size_t>> ranked;
  ranked.reserve(seeds.size());
  for (size_t i = 0; i < seeds.size(); ++i) {
    ranked.push_back({detail::scalar_residual(phi, seeds[i], cfg.product_metric), i});
  }
  std::sort(ranked.begin(), ranked.end());

  std::vector<size_t> candidates;
  for (size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i].first <= cfg.scan_threshold ||
        int(i) < cfg.speculative) {
      candidates.push_back(i);
    }
  }

  std::vector<IsolatedValue> found;
  for (size_t ci : candidates) {
    const auto& [scan_res, idx] = ranked[ci];
    const auto r = detail::refine_translated_point(phi, seeds[idx], cfg);
    if (r.converged) {
      const double t0 = std::fmod(r.t + 4.0 * kTwoPi, kTwoPi);
      bool merged = false;
      for (auto& f : found) {
        if (mod2pi_distance(f.t, t0) <= cfg.dedup_tol) {
          if (r.residual < f.residual) f = {t0, r.residual, r.x};
          merged = true;
          break;
        }
      }
      if (!merged) found.push_back({t0, r.residual, r.x});
    } else if (scan_res <= cfg.scan_threshold) {
      out.failures.push_back({r.t, r.residual, r.x});
    }
  }

  // Unfold the 2 pi-periodic base values across the requested window.
  for (const auto& f : found) {
    const double m0 = std::ceil((window_lo - f.t) / kTwoPi - 1e-12);
    for (double m = m0; f.t + kTwoPi * m < window_hi - 1e-12; m += 1.0) {
      out.values.push_back({f.t + kTwoPi * m, f.residual, f.witness});
    }
  }
  std::sort(out.values.begin(), out.values.end(),
            [](const IsolatedValue& a, const IsolatedValue& b) { return a.t < b.t; });
  return out;
}

// ---------------------------------------------------------------------------
// Orbit structure
// ---------------------------------------------------------------------------

/**
 * Checks that the full trajectory of a detected translated point is the
 * Reeb orbit at one of the candidate speeds; returns the confirmed speed
 * or throws StructureViolation.
 */
inline double verify_reeb_orbit_structure(
    const std::function<CVec(const CVec&, double)>& flow, const CVec& x,
    const std::vector<double>& speeds, double tol = 1e-6) {
  double best_err = std::numeric_limits<double>::infinity();
  double best_a = 0.0;
  for (double a : speeds) {
    double err = 0.0;
    for (int i = 0; i <= 50; ++i) {
      const double t = i / 50.0;
      err = std::max(err, (flow(x, t) - reeb_flow(x, a * t)).norm());
    }
    if (err < best_err) {
      best_err = err;
      best_a = a;
    }
  }
  if (best_err > tol) {
    throw StructureViolation(
        "trajectory is not a Reeb orbit at any candidate speed (err = " +
        std::to_string(best_err) + ")");
  }
  return best_a;
}

}  // namespace contactlab
