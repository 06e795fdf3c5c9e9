#include "contactlab/io.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace contactlab;
using contactlab::io::ExperimentConfig;

TEST_CASE("spectrum serialization carries branches, values and failures") {
  const RadialProfile f(1.0, 0.1);
  const SpectrumSet s = spectrum_radial(f, 1.0);
  const auto j = io::spectrum_to_json(s);
  REQUIRE(j["branches"].size() == 2);
  REQUIRE(j["branches"][0]["slope"].get<double>() ==
          Catch::Approx(kPi - 0.1));
  REQUIRE(j["values"].size() == 2);
  REQUIRE(j["no_convergence"].empty());
}

TEST_CASE("selector trace round trip to csv") {
  SelectorTrace t;
  for (int i = 0; i <= 4; ++i) {
    t.T.push_back(0.25 * i);
    t.c.push_back(0.5 * i);
  }
  const std::string csv = io::trace_to_csv(t);
  REQUIRE(csv.rfind("T,c\n", 0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 6);
  REQUIRE(io::trace_to_csv(t) == csv);  // deterministic
}

TEST_CASE("branch diagram csv covers all offsets") {
  const std::string csv =
      io::branch_diagram_csv({{kPi - 0.1}, {0.0}}, 1.0, 10, -1, 1);
  REQUIRE(csv.find("branch0_m-1") != std::string::npos);
  REQUIRE(csv.find("branch1_m1") != std::string::npos);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 12);
}

TEST_CASE("isotopy sample csv is columnar") {
  const auto sample = integrate_contact_flow(
      constant_hamiltonian(1.0), {CVec::Ones(2) / std::sqrt(2.0)}, 0.5, 100, 50);
  const std::string csv = io::sample_to_csv(sample);
  REQUIRE(csv.rfind("seed,time,re0,im0,re1,im1,g\n", 0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
}

TEST_CASE("config round trip is the identity on the schema") {
  ExperimentConfig c;
  c.command = "spectrum";
  c.n = 2;
  c.k = 3;
  c.r = 1.3;
  c.eps_grid = {0.05, 0.2};
  c.seed = 99;
  const auto j = io::config_to_json(c);
  const ExperimentConfig back = io::config_from_json(j);
  REQUIRE(io::config_to_json(back).dump() == j.dump());
}

TEST_CASE("config schema rejects unknown keys and bad values") {
  nlohmann::json j = io::config_to_json(ExperimentConfig{});
  j["not_a_key"] = 1;
  REQUIRE_THROWS_AS(io::config_from_json(j), ConfigError);

  nlohmann::json j2 = io::config_to_json(ExperimentConfig{});
  j2["k"] = "three";
  REQUIRE_THROWS_AS(io::config_from_json(j2), ConfigError);

  nlohmann::json j3 = io::config_to_json(ExperimentConfig{});
  j3["n"] = 0;
  REQUIRE_THROWS_AS(io::config_from_json(j3), ConfigError);
}

TEST_CASE("capacity report and decision serialization") {
  LowerBoundResult lo;
  lo.value = kPi - 0.1;
  lo.analytic_limit = kPi;
  UpperBoundResult hi;
  hi.energy = kPi;
  hi.displacer_kind = "rotation";
  const CapacityReport rep = make_capacity_report(2, 1.0, lo, hi);
  const auto j = io::capacity_report_to_json(rep);
  REQUIRE(j["lower_bound"].get<double>() == Catch::Approx(kPi - 0.1));
  REQUIRE(j["ceil_lower"].get<double>() == Catch::Approx(kPi));
  REQUIRE(j["displacer"] == "rotation");

  const auto d = nonsqueeze_decide(2, std::sqrt(2.0), 0.9);
  const auto jd = io::decision_to_json(d);
  REQUIRE(jd["witness_j"].get<int>() == 1);
  REQUIRE(jd["verdict"].get<std::string>().find("cannot") != std::string::npos);
}

TEST_CASE("axiom report serialization") {
  AxiomReport rep;
  rep.checks.push_back({"demo", true, 0.5, "detail"});
  const auto j = io::axiom_report_to_json(rep);
  REQUIRE(j.size() == 1);
  REQUIRE(j[0]["pass"].get<bool>());
}
