#pragma once

/**
 * The invariant suite behind the `verify` command: every module-level
 * invariant evaluated with margins, as a pass/fail matrix.  Failures are
 * entries, not exceptions; the caller decides the exit code.
 */

#include "contactlab/capacity.hpp"
#include "contactlab/product.hpp"

#include <future>

namespace contactlab {

struct VerifyConfig {
  int n = 1;
  int k = 2;
  uint64_t seed = 2024;
  double tolerance_scale = 1.0;
  int workers = 1;
};

namespace detail {

inline void run_jobs(std::vector<std::function<AxiomCheck()>>& jobs,
                     std::vector<AxiomCheck>& out, int workers) {
  out.resize(jobs.size());
  if (workers <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i) out[i] = jobs[i]();
    return;
  }
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      out[i] = jobs[i]();
    }
  };
  std::vector<std::future<void>> pool;
  for (int w = 0; w < workers; ++w) {
    pool.push_back(std::async(std::launch::async, worker));
  }
  for (auto& f : pool) f.get();
}

}  // namespace detail

inline AxiomReport run_verification_suite(const VerifyConfig& cfg) {
  const double ts = cfg.tolerance_scale;
  const int dim = cfg.n + 1;
  std::vector<std::function<AxiomCheck()>> jobs;

  // --- geometry ---
  jobs.push_back([=]() -> AxiomCheck {
    Rng rng(cfg.seed + 1);
    double worst_a = 0.0, worst_d = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const CVec x = random_sphere_point(rng, dim);
      worst_a = std::max(worst_a, std::abs(alpha1_raw(x, reeb_field(x)) - 1.0));
      worst_d = std::max(worst_d,
                         std::abs(dalpha1(reeb_field(x), random_tangent(rng, x))));
    }
    const bool ok = worst_a <= 1e-10 * ts && worst_d <= 1e-8 * ts;
    return {"geom.reeb_axioms", ok, 1e-8 * ts - worst_d,
            "alpha(R)-1 max " + std::to_string(worst_a)};
  });
  jobs.push_back([=]() -> AxiomCheck {
    Rng rng(cfg.seed + 2);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const CVec a = random_sphere_point(rng, dim);
      const CVec b = random_sphere_point(rng, dim);
      const double d = lens_distance(a, b, cfg.k);
      for (int j = 0; j < cfg.k; ++j) {
        worst = std::max(
            worst, std::abs(lens_distance(reeb_flow(a, kTwoPi * j / cfg.k), b,
                                          cfg.k) -
                            d));
      }
    }
    return {"geom.quotient_metric", worst <= 1e-12 * ts, 1e-12 * ts - worst,
            "deck-rotation invariance"};
  });
  jobs.push_back([=]() -> AxiomCheck {
    Rng rng(cfg.seed + 3);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const CVec x = random_sphere_point(rng, dim);
      const double t = 6.0 * (i + 1) / 200.0;
      worst = std::max(worst, circle_orbit_distance(reeb_flow(x, t), x) -
                                  circle_orbit_distance(x, x));
      worst = std::max(
          worst, lens_distance(reeb_flow(x, kTwoPi / cfg.k), x, cfg.k));
    }
    return {"geom.projection_equivariance", worst <= 1e-12 * ts,
            1e-12 * ts - worst, "cp/lens projections vs Reeb flow"};
  });
  jobs.push_back([=]() -> AxiomCheck {
    Rng rng(cfg.seed + 4);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double fd = 1e-5;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      CVec z = random_sphere_point(rng, cfg.n);
      z *= std::sqrt(2.0) * 0.9 * unif(rng);
      const CVec u = random_sphere_point(rng, cfg.n);
      const CVec v = random_sphere_point(rng, cfg.n);
      const CVec du = (chart_section((z + fd * u).eval()) -
                       chart_section((z - fd * u).eval())) /
                      (2.0 * fd);
      const CVec dv = (chart_section((z + fd * v).eval()) -
                       chart_section((z - fd * v).eval())) /
                      (2.0 * fd);
      worst = std::max(
          worst, std::abs(dalpha1(du, dv) - hermitian(u, v).imag()));
    }
    return {"geom.chart_symplectic", worst <= 1e-6 * ts, 1e-6 * ts - worst,
            "FD pullback of omega vs omega0"};
  });

  // --- profiles ---
  jobs.push_back([=]() -> AxiomCheck {
    double margin = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (double r : {0.6, 1.0, 1.3}) {
      for (double eps : {0.05, 0.2}) {
        const RadialProfile f(r, eps);
        const double r2 = r * r;
        double min_slope = 0.0;
        for (int i = 0; i <= 10000; ++i) {
          const double t = 1.1 * r2 * i / 10000.0;
          const double v = f.eval(t), d = f.deriv(t);
          ok = ok && v >= 0.0 && d <= 0.0;
          if (t >= r2) ok = ok && v == 0.0;
          if (t <= f.plateau_end()) ok = ok && v == f.plateau_value();
          if (std::abs(d) <= 1e-9) {
            ok = ok && (std::abs(v - f.plateau_value()) <= 1e-6 || v <= 1e-6);
          }
          min_slope = std::min(min_slope, d);
        }
        margin = std::min(margin, min_slope + kPi - 1e-6);
        ok = ok && (min_slope > -kPi + 1e-6);
      }
    }
    return {"profiles.step1_properties", ok, margin, "10^4-point grids"};
  });
  jobs.push_back([=]() -> AxiomCheck {
    const DisplacementHamiltonian d = make_translation_displacer(1.0, 0.2);
    const DisplacementHamiltonian d2 = rescale_displacer(d, 1.7);
    const double e1 = std::abs(d2.energy - 1.7 * 1.7 * d.energy);
    const double e2 = std::abs(d2.support_radius - 1.7 * d.support_radius);
    return {"profiles.rescaling_law", e1 < 1e-12 && e2 < 1e-12,
            1e-12 - std::max(e1, e2), "energy ~ r^2, support ~ r"};
  });

  // --- flows ---
  jobs.push_back([=]() -> AxiomCheck {
    Rng rng(cfg.seed + 5);
    const RadialProfile f(1.0, 0.2);
    const auto sample = integrate_contact_flow(
        radial_lift(f),
        {random_sphere_point(rng, dim), random_sphere_point(rng, dim)}, 1.0,
        1000, 100);
    double worst_g = 0.0;
    for (const auto& gs : sample.g) {
      for (double g : gs) worst_g = std::max(worst_g, std::abs(g));
    }
    return {"flows.strictness_of_lifts", worst_g <= 1e-7 * ts,
            1e-7 * ts - worst_g, "conformal factor of circle-invariant lift"};
  });
  jobs.push_back([=]() -> AxiomCheck {
    Rng rng(cfg.seed + 6);
    ContactHamiltonian lin;
    lin.value = [](double, const CVec& x) { return x[0].real(); };
    lin.name = "Re(x1)";
    const ContactMap phi = rk4_time_map(lin, 1.0, 1200);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const CVec x = random_sphere_point(rng, dim);
      worst = std::max(worst,
                       pullback_conformal_residual(phi, x, random_tangent(rng, x)));
    }
    return {"flows.contact_condition", worst <= 1e-6 * ts, 1e-6 * ts - worst,
            "FD pullback vs e^g alpha on a generic flow"};
  });
  jobs.push_back([=]() -> AxiomCheck {
    Rng rng(cfg.seed + 7);
    const RadialProfile f(1.0, 0.2);
    const ContactHamiltonian h = radial_lift(f);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const CVec x = random_sphere_point(rng, dim);
      const auto sample = integrate_contact_flow(h, {x}, 1.0, 2000, 2000);
      worst = std::max(
          worst, (sample.points[0].back() - radial_lift_flow(f, x, 1.0)).norm());
    }
    return {"flows.closed_form_agreement", worst <= 1e-7 * ts,
            1e-7 * ts - worst, "RK4 vs exact radial flow"};
  });
  jobs.push_back([=]() -> AxiomCheck {
    Rng rng(cfg.seed + 8);
    const RadialProfile f(1.0, 0.2);
    std::uniform_real_distribution<double> unif(0.0, kTwoPi);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const CVec x = random_sphere_point(rng, dim);
      const double s = unif(rng);
      worst = std::max(worst, (radial_lift_flow(f, reeb_flow(x, s), 1.0) -
                               reeb_flow(radial_lift_flow(f, x, 1.0), s))
                                  .norm());
    }
    return {"flows.reeb_equivariance", worst <= 1e-7 * ts, 1e-7 * ts - worst,
            "phi_h o reeb = reeb o phi_h for invariant h"};
  });

  // --- spectra ---
  jobs.push_back([=]() -> AxiomCheck {
    const RadialProfile f(1.0, 0.1);
    SpectrumGrid grid;
    grid.num_points = 1000;
    grid.seed = cfg.seed + 9;
    std::vector<CVec> seeds;
    CVec pole = CVec::Zero(dim);
    pole[dim - 1] = 1.0;
    seeds.push_back(pole);
    double worst = 0.0;
    for (double T : {0.5, 1.0}) {
      const auto num =
          spectrum_numeric(radial_map(f, T), dim, 0.0, kTwoPi, grid, seeds);
      const auto ana = spectrum_radial(f, T);
      worst = std::max(worst, directed_match_distance(num.numeric_values(),
                                                      ana.numeric_values()));
      worst = std::max(worst, directed_match_distance(ana.numeric_values(),
                                                      num.numeric_values()));
    }
    return {"spectra.analytic_numeric_agreement", worst <= 1e-5 * ts,
            1e-5 * ts - worst, "radial families, eq. branch set"};
  });
  jobs.push_back([=]() -> AxiomCheck {
    Rng rng(cfg.seed + 10);
    const RadialProfile f(0.5, 0.12);
    const ContactMap phi = radial_map(f, 1.0);
    const Eigen::MatrixXcd A = rotation_generator(dim, 0, dim - 1, kPi / 2.0);
    const ContactMap psi = unitary_map(UnitaryFlow(A).matrix(1.0), "rot");
    SpectrumGrid grid;
    grid.num_points = 800;
    grid.seed = cfg.seed + 10;
    const auto spc = spectrum_numeric(compose(psi, phi), dim, 0.0, kTwoPi, grid);
    double worst = 0.0;
    for (const auto& val : spc.values) {
      worst = std::max(worst,
                       translated_point_residual(psi, val.witness, val.t));
    }
    const bool nonempty = !spc.values.empty();
    return {"spectra.displacement_inclusion", nonempty && worst <= 1e-5 * ts,
            1e-5 * ts - worst, "witness certificates on psi o phi"};
  });

  // --- selector and capacity ---
  jobs.push_back([=]() -> AxiomCheck {
    AxiomSuiteConfig acfg;
    acfg.n = cfg.n;
    acfg.k = cfg.k;
    acfg.seed = cfg.seed;
    const AxiomReport rep = check_selector_axioms(acfg);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& c : rep.checks) margin = std::min(margin, c.margin);
    std::string detail;
    for (const auto& c : rep.checks) {
      if (!c.pass) detail += c.name + "; ";
    }
    return {"selector.axiom_harness", rep.all_pass(), margin,
            detail.empty() ? std::to_string(rep.checks.size()) + " checks"
                           : detail};
  });
  jobs.push_back([=]() -> AxiomCheck {
    double margin = std::numeric_limits<double>::infinity();
    bool ok = true;
    double prev = 0.0;
    for (double r : {0.2, 0.3, 0.4}) {
      const auto lb = capacity_lower_bound(cfg.k, r, {0.1 * kPi * r * r});
      ok = ok && lb.value >= prev;
      prev = lb.value;
      const DisplacementHamiltonian D = make_translation_displacer(r, 0.08 * r);
      const auto ub =
          capacity_upper_bound(cfg.k, r, 1.41, D, cfg.n, 400, 500, cfg.seed);
      ok = ok && (lb.value <= ub.energy + 1e-6);
      ok = ok && (ub.energy >= kPi * r * r - 1e-3);
      margin = std::min(margin, ub.energy - lb.value);
    }
    return {"capacity.energy_consistency", ok, margin,
            "lower <= upper + 1e-6 and E >= pi r^2 - 1e-3"};
  });
  jobs.push_back([=]() -> AxiomCheck {
    Rng rng(cfg.seed + 11);
    std::uniform_real_distribution<double> ua(0.05, 2.0);
    std::uniform_int_distribution<int> uk(1, 12);
    bool ok = true;
    for (int i = 0; i < 500 && ok; ++i) {
      const int k = uk(rng);
      const double a1 = ua(rng), a2 = ua(rng);
      const auto d = nonsqueeze_decide(k, a1, a2);
      if (d.witness_j) {
        ok = ok && (kPi * a1 * a1 > kTwoPi / k * *d.witness_j) &&
             (kTwoPi / k * *d.witness_j >= kPi * a2 * a2);
      }
    }
    return {"capacity.decision_soundness", ok, ok ? 1.0 : -1.0,
            "witness inequalities re-checked in plain arithmetic"};
  });

  // --- product ---
  jobs.push_back([=]() -> AxiomCheck {
    Rng rng(cfg.seed + 12);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      std::uniform_real_distribution<double> uth(-0.8, 0.8);
      const ProductPoint p{random_sphere_point(rng, dim),
                           random_sphere_point(rng, dim), uth(rng)};
      const ProductTangent r = product_reeb_field(p);
      worst = std::max(worst, std::abs(beta_eval(p, r) - 1.0));
      const ProductTangent v{random_tangent(rng, p.x1),
                             random_tangent(rng, p.x2), uth(rng)};
      worst = std::max(worst, std::abs(dbeta_fd(p, r, v)));
    }
    return {"product.reeb_axioms", worst <= 1e-8 * ts, 1e-8 * ts - worst,
            "beta(R) = 1, dbeta(R, .) = 0 at 500 points"};
  });
  jobs.push_back([=]() -> AxiomCheck {
    const RadialProfile f(1.0, 0.2);
    CVec mid = CVec::Zero(cfg.n);
    mid[0] = std::sqrt(0.4 * f.support_end());
    const auto sample = integrate_contact_flow(
        radial_lift(f), {chart_section(mid)}, 1.0, 2000);
    const double worst = check_ham_graph(sample, radial_lift(f));
    return {"product.ham_graph_identity", worst <= 1e-6 * ts, 1e-6 * ts - worst,
            "beta(dPhi/dt) vs h along the flow"};
  });
  jobs.push_back([=]() -> AxiomCheck {
    const RadialProfile f(1.0, 0.15);
    SpectrumGrid grid;
    grid.num_points = 800;
    grid.seed = cfg.seed + 13;
    CVec pole = CVec::Zero(dim);
    pole[dim - 1] = 1.0;
    const auto via_graph = spectrum_via_graph(graph_of(radial_family(f)), dim,
                                              0.0, kTwoPi, grid, {pole});
    const auto base = spectrum_radial(f, 1.0);
    const double worst = std::max(
        directed_match_distance(via_graph.numeric_values(), base.numeric_values()),
        directed_match_distance(base.numeric_values(), via_graph.numeric_values()));
    return {"product.spectrum_transport", worst <= 1e-5 * ts, 1e-5 * ts - worst,
            "graph route vs base branch set"};
  });
  jobs.push_back([=]() -> AxiomCheck {
    Rng rng(cfg.seed + 14);
    const RadialProfile f(1.0, 0.2);
    const GraphIsotopy graph = graph_of(radial_family(f));
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      worst = std::max(worst, graph_pullback_residual(
                                  graph, random_sphere_point(rng, dim),
                                  random_sphere_point(rng, dim), 0.2, 1.0, rng));
    }
    return {"product.strictness_transport", worst <= 1e-8 * ts,
            1e-8 * ts - worst, "strict base gives Psi* beta = beta"};
  });

  AxiomReport rep;
  detail::run_jobs(jobs, rep.checks, cfg.workers);
  return rep;
}

}  // namespace contactlab
