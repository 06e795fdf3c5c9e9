#include "contactlab/flow.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace contactlab;

namespace {

std::vector<CVec> random_seeds(Rng& rng, int dim, int count) {
  std::vector<CVec> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(random_sphere_point(rng, dim));
  return seeds;
}

/// Generic non-invariant test Hamiltonian h = Re(x_1), dh(R) != 0.
ContactHamiltonian linear_test_hamiltonian(int dim) {
  ContactHamiltonian h;
  h.value = [](double, const CVec& x) { return x[0].real(); };
  h.gradient = [dim](double, const CVec&) {
    CVec g = CVec::Zero(dim);
    g[0] = 1.0;
    return g;
  };
  h.name = "Re(x1)";
  return h;
}

}  // namespace

TEST_CASE("constant Hamiltonians generate Reeb multiples") {
  Rng rng(101);
  const ContactHamiltonian one = constant_hamiltonian(1.0);
  const ContactHamiltonian c = constant_hamiltonian(-0.7);
  for (int i = 0; i < 30; ++i) {
    const CVec x = random_sphere_point(rng, 3);
    REQUIRE((contact_vector_field(one, 0.0, x) - j_mul(x)).norm() < 1e-14);
    REQUIRE((contact_vector_field(c, 0.0, x) + 0.7 * j_mul(x)).norm() < 1e-14);
  }
}

TEST_CASE("contact vector field satisfies its defining equations") {
  Rng rng(103);
  const RadialProfile f(1.0, 0.2);
  const ContactHamiltonian h = radial_lift(f);
  const ContactHamiltonian lin = linear_test_hamiltonian(3);
  for (int i = 0; i < 100; ++i) {
    const CVec x = random_sphere_point(rng, 3);
    REQUIRE(contact_field_residual(h, 0.0, x, rng) < 1e-8);
    REQUIRE(contact_field_residual(lin, 0.0, x, rng) < 1e-6);
    // alpha1(Y) = h pointwise.
    const CVec y = contact_vector_field(h, 0.0, x);
    REQUIRE(std::abs(alpha1_raw(x, y) - h.value(0.0, x)) < 1e-8);
  }
}

TEST_CASE("resolution floor is enforced") {
  const ContactHamiltonian one = constant_hamiltonian(1.0);
  Rng rng(1);
  REQUIRE_THROWS_AS(
      integrate_contact_flow(one, random_seeds(rng, 2, 1), kTwoPi, 50),
      ResolutionTooCoarse);
}

TEST_CASE("unit Hamiltonian flows the full Reeb period") {
  Rng rng(107);
  const auto seeds = random_seeds(rng, 3, 5);
  const auto sample =
      integrate_contact_flow(constant_hamiltonian(1.0), seeds, kTwoPi, 2000, 2000);
  for (size_t s = 0; s < seeds.size(); ++s) {
    REQUIRE((sample.points[s].back() - seeds[s]).norm() < 1e-8);
    REQUIRE(std::abs(sample.g[s].back()) < 1e-12);
    REQUIRE(sample.g[s].front() == 0.0);
  }
  REQUIRE(sample.max_drift < 1e-9);
}

TEST_CASE("radial lift follows the Reeb closed form over the plateau") {
  const RadialProfile f(1.0, 0.2);
  const ContactHamiltonian h = radial_lift(f);
  const double a = f.plateau_value();

  // Seed over the chart plateau: chart radius^2 below plateau_end.
  CVec z = CVec::Zero(2);
  z[0] = std::sqrt(f.plateau_end() * 0.5) * Complex(0.6, 0.8);
  const CVec seed = chart_section(z);
  const auto sample = integrate_contact_flow(h, {seed}, 1.0, 2000, 100);
  for (size_t i = 0; i < sample.times.size(); ++i) {
    const double t = sample.times[i];
    REQUIRE((sample.points[0][i] - reeb_flow(seed, a * t)).norm() < 1e-7);
  }
}

TEST_CASE("RK4 matches the exact radial flow everywhere") {
  Rng rng(109);
  const RadialProfile f(1.1, 0.3);
  const ContactHamiltonian h = radial_lift(f);
  const auto seeds = random_seeds(rng, 3, 10);
  const auto sample = integrate_contact_flow(h, seeds, 1.0, 2000, 500);
  for (size_t s = 0; s < seeds.size(); ++s) {
    for (size_t i = 0; i < sample.times.size(); ++i) {
      REQUIRE((sample.points[s][i] -
               radial_lift_flow(f, seeds[s], sample.times[i]))
                  .norm() < 1e-7);
    }
  }
}

TEST_CASE("chart projection of the lifted flow is the planar radial flow") {
  Rng rng(113);
  const RadialProfile f(1.0, 0.25);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    CVec z = random_sphere_point(rng, 2);
    z *= f.radius() * unif(rng);
    const CVec x = reeb_flow(chart_section(z), kTwoPi * unif(rng));
    for (double t : {0.3, 0.7, 1.0}) {
      const CVec upstairs = radial_lift_flow(f, x, t);
      const CVec downstairs = radial_flow_r2n(f, z, t);
      REQUIRE(circle_orbit_distance(upstairs, chart_section(downstairs)) < 1e-6);
    }
  }
}

TEST_CASE("planar radial flow basics") {
  const RadialProfile f(1.0, 0.2);
  Rng rng(127);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  // Plateau points are fixed.
  CVec z0 = CVec::Zero(2);
  z0[1] = std::sqrt(f.plateau_end() * 0.9);
  REQUIRE((radial_flow_r2n(f, z0, 0.77) - z0).norm() < 1e-15);
  // Norm preservation.
  for (int i = 0; i < 50; ++i) {
    CVec z = random_sphere_point(rng, 2);
    z *= unif(rng);
    REQUIRE(radial_flow_r2n(f, z, unif(rng)).norm() ==
            Catch::Approx(z.norm()).margin(1e-14));
  }
}

TEST_CASE("RK4 convergence order is four") {
  Rng rng(131);
  const ContactHamiltonian h = linear_test_hamiltonian(2);
  const CVec seed = random_sphere_point(rng, 2);
  auto endpoint = [&](int steps) {
    return integrate_contact_flow(h, {seed}, 1.0, steps, steps).points[0].back();
  };
  const CVec ref = endpoint(4096);
  const double e1 = (endpoint(64) - ref).norm();
  const double e2 = (endpoint(128) - ref).norm();
  const double e3 = (endpoint(256) - ref).norm();
  const double o1 = std::log2(e1 / e2);
  const double o2 = std::log2(e2 / e3);
  REQUIRE(o1 == Catch::Approx(4.0).margin(0.5));
  REQUIRE(o2 == Catch::Approx(4.0).margin(0.5));
}

TEST_CASE("lift identity for the radial base Hamiltonian") {
  // pi_1 o phi_h^t = psi_G^t o pi_1 with the base flow known in closed form.
  Rng rng(137);
  const RadialProfile f(1.0, 0.2);
  const ContactHamiltonian h = radial_lift(f);
  std::uniform_real_distribution<double> unif(0.05, 0.9);
  for (int trial = 0; trial < 10; ++trial) {
    CVec z = random_sphere_point(rng, 2);
    z *= f.radius() * unif(rng);
    const CVec seed = reeb_flow(chart_section(z), kTwoPi * unif(rng));
    const auto sample = integrate_contact_flow(h, {seed}, 1.0, 2000, 100);
    for (size_t i = 0; i < sample.times.size(); ++i) {
      const CVec base = chart_section(radial_flow_r2n(f, z, sample.times[i]));
      REQUIRE(circle_orbit_distance(sample.points[0][i], base) < 1e-6);
    }
  }
}

TEST_CASE("lift identity for a non-radial base Hamiltonian") {
  // G([z]) = Re(z1 conj(z2)) lifts to the quadratic Hamiltonian of the
  // Hermitian matrix with A_{12} = A_{21} = 1/2; the base flow is
  // integrated independently in the chart.
  const int dim = 2;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dim);
  A(0, 1) = 0.5;
  A(1, 0) = 0.5;
  const UnitaryFlow exact(A);

  auto G_chart = [](const CVec& z) {
    const CVec x = chart_section(z);
    return hermitian(x, x).real() > 0
               ? (x[0] * std::conj(x[1])).real()
               : 0.0;
  };
  const auto grad = chart_fd_gradient(G_chart);

  Rng rng(139);
  std::uniform_real_distribution<double> unif(0.1, 0.8);
  for (int trial = 0; trial < 10; ++trial) {
    CVec z = random_sphere_point(rng, 1);
    z *= unif(rng);
    const CVec x0 = reeb_flow(chart_section(z), kTwoPi * unif(rng));
    for (double t : {0.4, 1.0}) {
      const CVec upstairs = exact.map(x0, t);
      const CVec downstairs = chart_flow(grad, z, t, 2000);
      REQUIRE(circle_orbit_distance(upstairs, chart_section(downstairs)) < 1e-6);
    }
  }
}

TEST_CASE("circle-invariant flows commute with the Reeb flow") {
  Rng rng(149);
  const RadialProfile f(0.9, 0.15);
  const ContactHamiltonian h = radial_lift(f);
  std::uniform_real_distribution<double> unif(0.0, kTwoPi);
  for (int trial = 0; trial < 20; ++trial) {
    const CVec x = random_sphere_point(rng, 3);
    const double s = unif(rng);
    const CVec lhs = radial_lift_flow(f, reeb_flow(x, s), 1.0);
    const CVec rhs = reeb_flow(radial_lift_flow(f, x, 1.0), s);
    REQUIRE((lhs - rhs).norm() < 1e-12);
    // Same through the integrator.
    const auto a = integrate_contact_flow(h, {reeb_flow(x, s)}, 1.0, 800, 800);
    const auto b = integrate_contact_flow(h, {x}, 1.0, 800, 800);
    REQUIRE((a.points[0].back() - reeb_flow(b.points[0].back(), s)).norm() < 1e-7);
  }
}

TEST_CASE("strictness of circle-invariant lifts") {
  Rng rng(151);
  const RadialProfile f(1.2, 0.4);
  const auto sample = integrate_contact_flow(radial_lift(f),
                                             random_seeds(rng, 3, 20), 1.0, 800, 80);
  for (const auto& gs : sample.g) {
    for (double g : gs) REQUIRE(std::abs(g) < 1e-7);
  }
}

TEST_CASE("pullback residual phi_t^* alpha = e^g alpha on a generic flow") {
  Rng rng(157);
  const ContactHamiltonian h = linear_test_hamiltonian(2);
  const ContactMap phi = rk4_time_map(h, 1.0, 1500);
  for (int trial = 0; trial < 15; ++trial) {
    const CVec x = random_sphere_point(rng, 2);
    const CVec w = random_tangent(rng, x);
    REQUIRE(pullback_conformal_residual(phi, x, w) < 1e-6);
  }
  // The conformal factor of this flow is genuinely nonzero somewhere.
  double max_g = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    max_g = std::max(max_g, std::abs(phi.conf(random_sphere_point(rng, 2))));
  }
  REQUIRE(max_g > 1e-3);
}

TEST_CASE("quadratic Hamiltonians integrate to their unitary flow") {
  Rng rng(163);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(3, 3);
  A(0, 2) = Complex(0.3, -0.2);
  A(2, 0) = Complex(0.3, 0.2);
  A(1, 1) = 0.5;
  const ContactHamiltonian h = quadratic_hamiltonian(A, "test_quadratic");
  const UnitaryFlow exact(A);
  const auto seeds = random_seeds(rng, 3, 5);
  const auto sample = integrate_contact_flow(h, seeds, 1.0, 1000, 1000);
  for (size_t s = 0; s < seeds.size(); ++s) {
    REQUIRE((sample.points[s].back() - exact.map(seeds[s], 1.0)).norm() < 1e-8);
    REQUIRE(std::abs(sample.g[s].back()) < 1e-10);  // strict
  }
}

TEST_CASE("lifted displacement Hamiltonian: range, invariance, displacement") {
  const int n = 2;
  const double r = 0.25;
  const DisplacementHamiltonian D = make_translation_displacer(r, 0.1);
  const double lambda_R = 1.30;
  const LiftedChartHamiltonian lifted = build_upper_bound_hamiltonian(D, lambda_R);

  Rng rng(167);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::uniform_real_distribution<double> unif(0.0, kTwoPi);
  for (int i = 0; i < 10000; ++i) {
    const CVec x = random_sphere_point(rng, n + 1);
    const double v = lifted.h.value(0.0, x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    if (i % 100 == 0) {
      REQUIRE(std::abs(lifted.h.value(0.0, reeb_flow(x, unif(rng))) - v) < 1e-12);
    }
  }
  REQUIRE(lo >= D.vmin - 1e-9);
  REQUIRE(hi <= D.vmax + 1e-9);

  // Time-1 flow maps ball samples outside the ball (chart route).
  int outside = 0;
  const int tested = 500;
  for (int i = 0; i < tested; ++i) {
    const CVec x = sample_lifted_ball(rng, n, r);
    const double u = chart_radius_sq(x);
    const int last = n;
    const Complex phase = std::conj(x[last]) / std::abs(x[last]);
    CVec z(n);
    z = std::sqrt(2.0) * (phase * x.head(n));
    (void)u;
    const CVec z1 = chart_flow(lifted.base_grad, z, 1.0, 1200);
    if (z1.norm() > r) ++outside;
  }
  REQUIRE(outside == tested);

  // Swept region overflowing the cutoff is rejected.
  REQUIRE_THROWS_AS(
      build_upper_bound_hamiltonian(make_translation_displacer(0.8, 0.1), 1.30),
      SupportOverflow);
}

TEST_CASE("chart+fiber lift map agrees with the direct sphere RK4") {
  const int n = 2;
  const DisplacementHamiltonian D = make_translation_displacer(0.25, 0.1);
  const LiftedChartHamiltonian lifted = build_upper_bound_hamiltonian(D, 1.41);
  const ContactMap fast = lifted_chart_time_map(lifted.base, lifted.base_grad,
                                                1.0, 1500, "fast_lift");
  const ContactMap direct = rk4_time_map(lifted.h, 1.0, 1500);
  Rng rng(173);
  for (int i = 0; i < 12; ++i) {
    const CVec x = (i % 2 == 0) ? sample_lifted_ball(rng, n, 0.25)
                                : sample_lifted_ball(rng, n, 0.9);
    REQUIRE((fast.map(x) - direct.map(x)).norm() < 1e-6);
  }
  // Points at the chart boundary (h = 0 there) are fixed.
  CVec eq = CVec::Zero(n + 1);
  eq[0] = 1.0;
  REQUIRE((fast.map(eq) - eq).norm() == 0.0);
}
