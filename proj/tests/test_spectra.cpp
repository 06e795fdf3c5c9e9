#include "contactlab/spectrum.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace contactlab;

namespace {

/// Chart plateau seeds: exact translated points of a radial lift family.
std::vector<CVec> plateau_seeds(const RadialProfile& f, int n, int count,
                                uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  std::vector<CVec> out;
  for (int i = 0; i < count; ++i) {
    CVec z = random_sphere_point(rng, n);
    z *= std::sqrt(f.plateau_end() * unif(rng));
    out.push_back(reeb_flow(chart_section(z), kTwoPi * unif(rng)));
  }
  return out;
}

}  // namespace

TEST_CASE("discriminant point detection") {
  Rng rng(201);
  const ContactMap id = identity_map();
  const ContactMap r03 = reeb_map(0.3);
  for (int i = 0; i < 20; ++i) {
    const CVec x = random_sphere_point(rng, 3);
    REQUIRE(is_discriminant_point(id, x, 1e-9));
    REQUIRE_FALSE(is_discriminant_point(r03, x, 1e-3));
  }
}

TEST_CASE("translated point residuals on Reeb orbits") {
  Rng rng(203);
  const double s = 1.234;
  const ContactMap phi = reeb_map(s);
  for (int i = 0; i < 50; ++i) {
    const CVec x = random_sphere_point(rng, 3);
    REQUIRE(translated_point_residual(phi, x, s) < 1e-13);
    // 2 pi periodicity in the shift.
    REQUIRE(translated_point_residual(phi, x, s + kTwoPi) ==
            Catch::Approx(translated_point_residual(phi, x, s)).margin(1e-12));
    REQUIRE(translated_point_residual(phi, x, s + 0.4) > 0.1);
  }
}

TEST_CASE("plateau points are translated points of the radial flow") {
  const RadialProfile f(1.0, 0.1);
  const ContactMap phi = radial_map(f, 1.0);
  const double a = f.plateau_value();
  for (const CVec& x : plateau_seeds(f, 2, 20, 207)) {
    REQUIRE(translated_point_residual(phi, x, a) < 1e-7);
    // x is discriminant for reeb(-a) o phi.
    REQUIRE(is_discriminant_point(compose(reeb_map(-a), phi), x, 1e-9));
  }
}

TEST_CASE("analytic radial spectrum branches") {
  const RadialProfile f1(1.0, 0.1);
  SECTION("T = 0 collapses onto the 2 pi ladder") {
    const auto s = spectrum_radial(f1, 0.0);
    REQUIRE(s.numeric_values() == std::vector<double>{0.0});
  }
  SECTION("T = 1 gives {0, pi - 0.1} in the fundamental window") {
    const auto s = spectrum_radial(f1, 1.0);
    const auto v = s.numeric_values();
    REQUIRE(v.size() == 2);
    REQUIRE(v[0] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(v[1] == Catch::Approx(kPi - 0.1).margin(1e-12));
  }
  SECTION("branch value at T = 0.5 for r = 1.2") {
    const RadialProfile f2(1.2, 0.05);
    const auto s = spectrum_radial(f2, 0.5);
    const double expect = 0.5 * (kPi * 1.44 - 0.05);
    const auto v = s.numeric_values();
    REQUIRE(std::any_of(v.begin(), v.end(), [&](double t) {
      return std::abs(t - expect) < 1e-10;
    }));
    REQUIRE(expect == Catch::Approx(2.2369).margin(5e-4));
  }
}

TEST_CASE("numeric spectrum of a Reeb rotation") {
  const double s = 1.0;
  SpectrumGrid cfg;
  cfg.num_points = 400;
  const auto sp = spectrum_numeric(reeb_map(s), 3, 0.0, kTwoPi, cfg);
  REQUIRE(sp.failures.empty());
  const auto v = sp.numeric_values();
  REQUIRE(v.size() == 1);
  REQUIRE(v[0] == Catch::Approx(s).margin(1e-9));
}

TEST_CASE("numeric radial spectrum matches the analytic branches") {
  const RadialProfile f(1.0, 0.1);
  const ContactMap phi = radial_map(f, 1.0);
  SpectrumGrid cfg;
  cfg.num_points = 1500;
  const auto numeric =
      spectrum_numeric(phi, 2, 0.0, kTwoPi, cfg, plateau_seeds(f, 1, 5, 211));
  const auto analytic = spectrum_radial(f, 1.0);
  const double d_fw =
      directed_match_distance(numeric.numeric_values(), analytic.numeric_values());
  const double d_bw =
      directed_match_distance(analytic.numeric_values(), numeric.numeric_values());
  REQUIRE(d_fw < 1e-5);  // no extraneous values
  REQUIRE(d_bw < 1e-5);  // both branches found
  for (const auto& val : numeric.values) REQUIRE(val.residual <= 1e-7);
}

TEST_CASE("numeric spectrum in complex dimension three") {
  const RadialProfile f(0.8, 0.2);
  const ContactMap phi = radial_map(f, 0.75);
  SpectrumGrid cfg;
  cfg.num_points = 1500;
  const auto numeric =
      spectrum_numeric(phi, 3, 0.0, kTwoPi, cfg, plateau_seeds(f, 2, 5, 213));
  const auto analytic = spectrum_radial(f, 0.75);
  REQUIRE(directed_match_distance(numeric.numeric_values(),
                                  analytic.numeric_values()) < 1e-5);
  REQUIRE(directed_match_distance(analytic.numeric_values(),
                                  numeric.numeric_values()) < 1e-5);
}

TEST_CASE("spectrum is invariant under strict unitary conjugation") {
  const RadialProfile f(1.0, 0.15);
  const ContactMap phi = radial_map(f, 1.0);
  Rng rng(217);
  const Eigen::MatrixXcd U = random_unitary(rng, 2);
  const ContactMap conj = conjugate_strict(U, phi);

  CVec pole = CVec::Zero(2);
  pole[1] = 1.0;
  std::vector<CVec> seeds_plain = plateau_seeds(f, 1, 4, 219);
  std::vector<CVec> seeds_conj;
  for (const auto& s : seeds_plain) seeds_conj.push_back((U * s).eval());
  // Give both engines both seed families; extraneous seeds are harmless.
  std::vector<CVec> seeds_all = seeds_plain;
  seeds_all.insert(seeds_all.end(), seeds_conj.begin(), seeds_conj.end());

  SpectrumGrid cfg;
  cfg.num_points = 1200;
  const auto sp = spectrum_numeric(phi, 2, 0.0, kTwoPi, cfg, seeds_all);
  const auto sc = spectrum_numeric(conj, 2, 0.0, kTwoPi, cfg, seeds_all);
  REQUIRE(directed_match_distance(sp.numeric_values(), sc.numeric_values()) < 1e-5);
  REQUIRE(directed_match_distance(sc.numeric_values(), sp.numeric_values()) < 1e-5);
}

TEST_CASE("displacement shrinks the spectrum of the composition") {
  // psi = quarter rotation displaces the support tube of the small radial
  // lift; every spectral value of psi o phi must be a value of psi, and
  // the detected witnesses themselves certify it.
  const int dim = 3;
  const RadialProfile f(0.45, 0.12);
  const ContactMap phi = radial_map(f, 1.0);
  const Eigen::MatrixXcd A = rotation_generator(dim, 0, dim - 1, kPi / 2.0);
  const ContactMap psi = unitary_map(UnitaryFlow(A).matrix(1.0), "quarter");

  // Sampled displacement of the support tube.
  Rng rng(223);
  for (int i = 0; i < 500; ++i) {
    const CVec x = sample_lifted_ball(rng, dim - 1, f.radius());
    REQUIRE(std::sqrt(chart_radius_sq(psi.map(x))) > f.radius());
  }

  SpectrumGrid cfg;
  cfg.num_points = 1500;
  const auto spc = spectrum_numeric(compose(psi, phi), dim, 0.0, kTwoPi, cfg);
  REQUIRE_FALSE(spc.values.empty());
  for (const auto& val : spc.values) {
    // Lemma-level certificate: the witness is a translated point of psi
    // alone with the same shift, and it sits outside the support tube.
    REQUIRE(translated_point_residual(psi, val.witness, val.t) < 1e-6);
    REQUIRE(chart_radius_sq(val.witness) >= f.support_end() - 1e-9);
  }

  const auto sps = spectrum_numeric(psi, dim, 0.0, kTwoPi, cfg);
  REQUIRE(directed_match_distance(spc.numeric_values(), sps.numeric_values()) <
          1e-5);
}

TEST_CASE("reeb orbit structure of detected translated points") {
  const RadialProfile f(1.0, 0.2);
  auto family = [&f](const CVec& x, double t) { return radial_lift_flow(f, x, t); };
  const double a = f.plateau_value();

  // Plateau point: speed a confirmed.
  const CVec xp = plateau_seeds(f, 1, 1, 227)[0];
  REQUIRE(verify_reeb_orbit_structure(family, xp, {a, 0.0}) ==
          Catch::Approx(a));

  // Point outside the support: speed 0 confirmed.
  CVec e0 = CVec::Zero(2);
  e0[0] = 1.0;
  REQUIRE(verify_reeb_orbit_structure(family, e0, {a, 0.0}) == 0.0);

  // Descent point: never a translated point, and not a Reeb orbit of
  // either speed.
  CVec z = CVec::Zero(1);
  z[0] = std::sqrt(0.5 * (f.plateau_end() + f.support_end()));
  const CVec xd = chart_section(z);
  const ContactMap phi = radial_map(f, 1.0);
  const auto [t_best, res] = best_shift(phi, xd);
  REQUIRE(res > 1e-3);
  REQUIRE_THROWS_AS(verify_reeb_orbit_structure(family, xd, {a, 0.0}),
                    StructureViolation);
}
