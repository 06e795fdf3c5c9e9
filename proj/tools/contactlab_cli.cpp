/**
 * contactlab — experiment runner.
 *
 * Subcommands drive the library pipelines with reproducible configs:
 *
 *   spectrum    numeric + analytic spectra of a flow family
 *   selector    tracked selector trace and branch-diagram data
 *   capacity    certified lower/upper capacity bounds for a lifted ball
 *   nonsqueeze  ladder arithmetic verdicts (optionally the full pipeline)
 *   verify      the invariant suite as a pass/fail matrix
 *
 * Config comes from --config (JSON, schema-validated) with flag overrides;
 * every run writes the resolved config, a timestamp-free report.json and
 * a meta.json with wall-clock information into --out-dir.
 *
 * Exit codes: 0 ok, 1 config error, 2 numeric warnings (NoConvergence
 * entries present), 3 ambiguity (truncated selector trace), 4 invariant
 * failure.
 */

#include "contactlab/contactlab.hpp"
#include "contactlab/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace contactlab;
using contactlab::io::ExperimentConfig;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumericWarning = 2;
constexpr int kExitAmbiguous = 3;
constexpr int kExitInvariantFailure = 4;

void write_outputs(const ExperimentConfig& cfg, const json& report,
                   const std::vector<std::pair<std::string, std::string>>& files) {
  fs::create_directories(cfg.out_dir);
  io::write_json(cfg.out_dir + "/resolved_config.json", io::config_to_json(cfg));
  io::write_json(cfg.out_dir + "/report.json", report);
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  json meta{{"unix_time_ms",
             std::chrono::duration_cast<std::chrono::milliseconds>(now).count()}};
  io::write_json(cfg.out_dir + "/meta.json", meta);
  for (const auto& [name, text] : files) {
    io::write_text(cfg.out_dir + "/" + name, text);
  }
}

std::vector<CVec> radial_seed_points(const RadialProfile& f, int n,
                                     uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  std::vector<CVec> seeds;
  CVec pole = CVec::Zero(n + 1);
  pole[n] = 1.0;
  seeds.push_back(pole);
  for (int i = 0; i < 6; ++i) {
    CVec z = random_sphere_point(rng, n);
    z *= std::sqrt(f.plateau_end() * unif(rng));
    seeds.push_back(reeb_flow(chart_section(z), kTwoPi * unif(rng)));
  }
  return seeds;
}

UpperBoundProvider displacer_provider(const ExperimentConfig& cfg) {
  if (cfg.displacer == "rotation") return rotation_upper_bound(cfg.n);
  if (cfg.displacer == "translation") {
    return translation_upper_bound(cfg.margin, cfg.lambda_R, cfg.n);
  }
  // Anything else is a displacer definition file.
  const DisplacementHamiltonian D = load_displacer(cfg.displacer);
  return [D, cfg](int k, double r) {
    return capacity_upper_bound(k, r, cfg.lambda_R, D, cfg.n);
  };
}

int cmd_spectrum(const ExperimentConfig& cfg) {
  SpectrumGrid grid;
  grid.num_points = cfg.samples;
  grid.seed = cfg.seed;
  json report;
  SpectrumSet numeric;
  if (cfg.family == "reeb") {
    numeric = spectrum_numeric(reeb_map(cfg.reeb_s), cfg.n + 1, cfg.window_lo,
                               cfg.window_hi, grid);
    report["family"] = "reeb";
  } else {
    const RadialProfile f(cfg.r, cfg.eps_grid.at(0));
    numeric = spectrum_numeric(radial_map(f, cfg.T), cfg.n + 1, cfg.window_lo,
                               cfg.window_hi, grid,
                               radial_seed_points(f, cfg.n, cfg.seed));
    const SpectrumSet analytic =
        spectrum_radial(f, cfg.T, cfg.window_lo, cfg.window_hi);
    report["family"] = "radial";
    report["analytic"] = io::spectrum_to_json(analytic);
    report["match_numeric_to_analytic"] = directed_match_distance(
        numeric.numeric_values(), analytic.numeric_values());
    report["match_analytic_to_numeric"] = directed_match_distance(
        analytic.numeric_values(), numeric.numeric_values());
  }
  report["numeric"] = io::spectrum_to_json(numeric);
  write_outputs(cfg, report, {});
  return numeric.failures.empty() ? kExitOk : kExitNumericWarning;
}

int cmd_selector(const ExperimentConfig& cfg) {
  std::vector<SpectrumBranch> branches;
  TrackingHints hints;
  if (cfg.family == "reeb") {
    branches = {{1.0}};
    hints.nonnegative_isotopy = true;
  } else {
    const RadialProfile f(cfg.r, cfg.eps_grid.at(0));
    branches = {{f.plateau_value()}, {0.0}};
    hints.nonnegative_isotopy = true;
  }
  const SelectorTrace trace =
      track_selector(branches, cfg.T_max, cfg.T_grid, hints);
  json report = io::trace_to_json(trace);
  write_outputs(cfg, report,
                {{"trace.csv", io::trace_to_csv(trace)},
                 {"branches.csv",
                  io::branch_diagram_csv(branches, cfg.T_max, cfg.T_grid)}});
  if (trace.ambiguous) {
    std::cerr << "warning: trace truncated at T = " << trace.ambiguous_at
              << " (branch crossing)\n";
    return kExitAmbiguous;
  }
  return kExitOk;
}

int cmd_capacity(const ExperimentConfig& cfg) {
  const LowerBoundResult lo =
      capacity_lower_bound(cfg.k, cfg.r, cfg.eps_grid, cfg.T_grid);
  const UpperBoundResult hi = displacer_provider(cfg)(cfg.k, cfg.r);
  const CapacityReport rep = make_capacity_report(cfg.k, cfg.r, lo, hi);
  json report = io::capacity_report_to_json(rep);
  report["eps_grid"] = lo.eps_grid;
  report["lower_values"] = lo.values;
  std::ostringstream csv;
  csv << std::setprecision(17)
      << "k,r,lower,upper,ceil_lower,analytic_limit\n"
      << rep.k << "," << rep.r << "," << rep.lower_bound << ","
      << rep.upper_bound << "," << rep.ceil_lower << "," << rep.analytic_limit
      << "\n";
  write_outputs(cfg, report, {{"capacity.csv", csv.str()}});
  const bool consistent = rep.lower_bound <= rep.upper_bound + 1e-6;
  return consistent ? kExitOk : kExitInvariantFailure;
}

int cmd_nonsqueeze(const ExperimentConfig& cfg) {
  json report;
  if (cfg.r_in > 0.0 && cfg.r_out > 0.0 && cfg.family == "full") {
    const auto ex = full_nonsqueezing_experiment(cfg.k, cfg.r_in, cfg.r_out,
                                                 cfg.eps_grid,
                                                 displacer_provider(cfg));
    report["inner"] = io::capacity_report_to_json(ex.inner);
    report["outer"] = io::capacity_report_to_json(ex.outer);
    report["fires"] = ex.fires;
    if (ex.fires) report["witness_j"] = ex.witness_j;
    report["ceil_lower_in"] = ex.ceil_lower_in;
    report["pi_r_out_sq"] = ex.pi_r_out_sq;
  } else {
    const NonSqueezeDecision d = nonsqueeze_decide(cfg.k, cfg.a1, cfg.a2);
    report = io::decision_to_json(d);
  }
  write_outputs(cfg, report, {});
  return kExitOk;
}

int cmd_verify(const ExperimentConfig& cfg) {
  VerifyConfig vc;
  vc.n = cfg.n;
  vc.k = cfg.k;
  vc.seed = cfg.seed;
  vc.tolerance_scale = cfg.tolerance_scale;
  vc.workers = cfg.workers;
  const AxiomReport rep = run_verification_suite(vc);
  json report = io::axiom_report_to_json(rep);
  write_outputs(cfg, report, {});
  for (const auto& c : rep.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
              << "  margin=" << c.margin << "  " << c.detail << "\n";
  }
  return rep.all_pass() ? kExitOk : kExitInvariantFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contactlab: numerical laboratory for contact flows, spectra, "
               "selectors and capacities on sphere quotients"};
  app.require_subcommand(1);

  std::string config_path;
  ExperimentConfig cfg;
  app.add_option("--config", config_path, "JSON config file");

  // Flag overrides (applied on top of the config file).
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "complex projective dimension");
    sub->add_option("--k", cfg.k, "lens quotient order");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--out-dir", cfg.out_dir, "output directory");
    sub->add_option("--workers", cfg.workers, "job-level parallelism");
    sub->add_option("--tolerance-scale", cfg.tolerance_scale,
                    "scale factor on verification tolerances");
  };

  CLI::App* sp = app.add_subcommand("spectrum", "numeric spectrum of a family");
  add_common(sp);
  sp->add_option("--family", cfg.family, "radial | reeb");
  sp->add_option("--r", cfg.r, "profile radius");
  sp->add_option("--eps", cfg.eps_grid, "profile defect(s)");
  sp->add_option("--T", cfg.T, "family parameter");
  sp->add_option("--reeb-s", cfg.reeb_s, "Reeb rotation time");
  sp->add_option("--samples", cfg.samples, "sphere sample count");

  CLI::App* se = app.add_subcommand("selector", "tracked selector trace");
  add_common(se);
  se->add_option("--family", cfg.family, "radial | reeb");
  se->add_option("--r", cfg.r, "profile radius");
  se->add_option("--eps", cfg.eps_grid, "profile defect(s)");
  se->add_option("--T-max", cfg.T_max, "trace endpoint");
  se->add_option("--T-grid", cfg.T_grid, "grid points");

  CLI::App* ca = app.add_subcommand("capacity", "capacity bounds for B_k(r)");
  add_common(ca);
  ca->add_option("--r", cfg.r, "ball radius");
  ca->add_option("--eps", cfg.eps_grid, "eps grid for the lower bound");
  ca->add_option("--displacer", cfg.displacer,
                 "translation | rotation | <file.json>");
  ca->add_option("--lambda-R", cfg.lambda_R, "cutoff ball radius");
  ca->add_option("--margin", cfg.margin, "translation displacer margin");

  CLI::App* ns = app.add_subcommand("nonsqueeze", "ladder arithmetic verdict");
  add_common(ns);
  ns->add_option("--a1", cfg.a1, "inner radius");
  ns->add_option("--a2", cfg.a2, "outer radius");
  ns->add_option("--family", cfg.family, "decision | full");
  ns->add_option("--r-in", cfg.r_in, "inner ball radius (full pipeline)");
  ns->add_option("--r-out", cfg.r_out, "outer ball radius (full pipeline)");
  ns->add_option("--eps", cfg.eps_grid, "eps grid (full pipeline)");
  ns->add_option("--displacer", cfg.displacer,
                 "translation | rotation | <file.json>");

  CLI::App* ve = app.add_subcommand("verify", "run the invariant suite");
  add_common(ve);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config: " + config_path);
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
      }
      ExperimentConfig file_cfg = io::config_from_json(j);
      // Flag overrides already live in cfg; merge: start from the file and
      // re-apply every flag the user passed.
      ExperimentConfig merged = file_cfg;
      for (CLI::App* sub : {sp, se, ca, ns, ve}) {
        if (!sub->parsed()) continue;
        for (const CLI::Option* opt : sub->get_options()) {
          if (opt->count() == 0) continue;
          const std::string name = opt->get_name();
          if (name == "--n") merged.n = cfg.n;
          if (name == "--k") merged.k = cfg.k;
          if (name == "--seed") merged.seed = cfg.seed;
          if (name == "--out-dir") merged.out_dir = cfg.out_dir;
          if (name == "--workers") merged.workers = cfg.workers;
          if (name == "--tolerance-scale")
            merged.tolerance_scale = cfg.tolerance_scale;
          if (name == "--family") merged.family = cfg.family;
          if (name == "--r") merged.r = cfg.r;
          if (name == "--eps") merged.eps_grid = cfg.eps_grid;
          if (name == "--T") merged.T = cfg.T;
          if (name == "--reeb-s") merged.reeb_s = cfg.reeb_s;
          if (name == "--samples") merged.samples = cfg.samples;
          if (name == "--T-max") merged.T_max = cfg.T_max;
          if (name == "--T-grid") merged.T_grid = cfg.T_grid;
          if (name == "--displacer") merged.displacer = cfg.displacer;
          if (name == "--lambda-R") merged.lambda_R = cfg.lambda_R;
          if (name == "--margin") merged.margin = cfg.margin;
          if (name == "--a1") merged.a1 = cfg.a1;
          if (name == "--a2") merged.a2 = cfg.a2;
          if (name == "--r-in") merged.r_in = cfg.r_in;
          if (name == "--r-out") merged.r_out = cfg.r_out;
        }
      }
      cfg = merged;
    }

    if (sp->parsed()) {
      cfg.command = "spectrum";
      return cmd_spectrum(cfg);
    }
    if (se->parsed()) {
      cfg.command = "selector";
      return cmd_selector(cfg);
    }
    if (ca->parsed()) {
      cfg.command = "capacity";
      return cmd_capacity(cfg);
    }
    if (ns->parsed()) {
      cfg.command = "nonsqueeze";
      return cmd_nonsqueeze(cfg);
    }
    if (ve->parsed()) {
      cfg.command = "verify";
      return cmd_verify(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const AmbiguousCrossing& e) {
    std::cerr << "ambiguous: " << e.what() << "\n";
    return kExitAmbiguous;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariantFailure;
  }
  return kExitConfig;
}
