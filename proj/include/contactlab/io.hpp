#pragma once

/**
 * Serialization of reports and plot-ready data: JSON for structured
 * reports (spectra, capacity reports, decisions, axiom matrices) and CSV
 * for trajectories and selector traces.  The experiment config schema used
 * by the CLI lives here so that parse/serialize round-trips are testable.
 */

#include "contactlab/capacity.hpp"
#include "contactlab/product.hpp"
#include "contactlab/selector.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace contactlab::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json spectrum_to_json(const SpectrumSet& s) {
  json j;
  j["window"] = {s.window_lo, s.window_hi};
  j["branches"] = json::array();
  for (const auto& b : s.branches) {
    j["branches"].push_back({{"slope", b.slope},
                             {"offset_period", kTwoPi},
                             {"validity", {b.validity_lo, b.validity_hi}}});
  }
  j["values"] = json::array();
  for (const auto& v : s.values) {
    j["values"].push_back({{"t", v.t}, {"residual", v.residual}});
  }
  j["no_convergence"] = json::array();
  for (const auto& v : s.failures) {
    j["no_convergence"].push_back({{"t", v.t}, {"residual", v.residual}});
  }
  return j;
}

inline json trace_to_json(const SelectorTrace& t) {
  json j;
  j["T"] = t.T;
  j["c"] = t.c;
  j["branch"] = t.branch;
  j["ambiguous"] = t.ambiguous;
  if (t.ambiguous) j["ambiguous_at"] = t.ambiguous_at;
  return j;
}

inline json capacity_report_to_json(const CapacityReport& r) {
  return json{{"k", r.k},
              {"r", r.r},
              {"lower_bound", r.lower_bound},
              {"analytic_limit", r.analytic_limit},
              {"upper_bound", r.upper_bound},
              {"ceil_lower", r.ceil_lower},
              {"displacer", r.displacer_kind},
              {"upper_declared", r.upper_declared},
              {"chart_samples", r.chart_samples},
              {"sphere_samples", r.sphere_samples}};
}

inline json decision_to_json(const NonSqueezeDecision& d) {
  json j{{"k", d.k}, {"a1", d.a1}, {"a2", d.a2}, {"verdict", d.verdict}};
  if (d.witness_j) j["witness_j"] = *d.witness_j;
  if (d.requires_r1_cap) j["requires_r1_cap"] = true;
  return j;
}

inline json axiom_report_to_json(const AxiomReport& r) {
  json j = json::array();
  for (const auto& c : r.checks) {
    j.push_back({{"name", c.name},
                 {"pass", c.pass},
                 {"margin", c.margin},
                 {"detail", c.detail}});
  }
  return j;
}

// ---------------------------------------------------------------------------
// Columnar data
// ---------------------------------------------------------------------------

/// Two-column selector trace (T, c) for branch-diagram plots.
inline std::string trace_to_csv(const SelectorTrace& t) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "T,c\n";
  for (size_t i = 0; i < t.T.size(); ++i) os << t.T[i] << "," << t.c[i] << "\n";
  return os.str();
}

/// All branch lines slope*T + 2 pi j over the grid, for overlay plots.
inline std::string branch_diagram_csv(const std::vector<SpectrumBranch>& branches,
                                      double T_max, int grid, int j_lo = -1,
                                      int j_hi = 1) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "T";
  for (size_t b = 0; b < branches.size(); ++b) {
    for (int j = j_lo; j <= j_hi; ++j) os << ",branch" << b << "_m" << j;
  }
  os << "\n";
  for (int i = 0; i <= grid; ++i) {
    const double T = T_max * i / grid;
    os << T;
    for (const auto& b : branches) {
      for (int j = j_lo; j <= j_hi; ++j) os << "," << b.slope * T + kTwoPi * j;
    }
    os << "\n";
  }
  return os.str();
}

/// Columnar isotopy sample: seed, time, point coordinates (re/im), g.
inline std::string sample_to_csv(const ContactIsotopySample& s) {
  std::ostringstream os;
  os << std::setprecision(17);
  const int dim = s.points.empty() ? 0 : int(s.points[0][0].size());
  os << "seed,time";
  for (int j = 0; j < dim; ++j) os << ",re" << j << ",im" << j;
  os << ",g\n";
  for (size_t seed = 0; seed < s.points.size(); ++seed) {
    for (size_t i = 0; i < s.times.size(); ++i) {
      os << seed << "," << s.times[i];
      for (int j = 0; j < dim; ++j) {
        os << "," << s.points[seed][i][j].real() << ","
           << s.points[seed][i][j].imag();
      }
      os << "," << s.g[seed][i] << "\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Experiment config
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::string command;
  int n = 1;
  int k = 2;
  double r = 1.0;
  std::vector<double> eps_grid = {0.1};
  double T = 1.0;
  double T_max = 1.0;
  int T_grid = 100;
  double reeb_s = 1.0;
  std::string family = "radial";  // radial | reeb
  int steps = 2000;
  int samples = 2000;
  double a1 = 1.0, a2 = 1.0;
  double r_in = 0.3, r_out = 0.3;
  double lambda_R = 1.3;
  double margin = 0.2;
  std::string displacer = "translation";  // translation | rotation | <file.json>
  double window_lo = 0.0, window_hi = kTwoPi;
  uint64_t seed = 2024;
  double tolerance_scale = 1.0;
  int workers = 1;
  std::string out_dir = "out";
};

inline json config_to_json(const ExperimentConfig& c) {
  return json{{"command", c.command},
              {"n", c.n},
              {"k", c.k},
              {"r", c.r},
              {"eps_grid", c.eps_grid},
              {"T", c.T},
              {"T_max", c.T_max},
              {"T_grid", c.T_grid},
              {"reeb_s", c.reeb_s},
              {"family", c.family},
              {"steps", c.steps},
              {"samples", c.samples},
              {"a1", c.a1},
              {"a2", c.a2},
              {"r_in", c.r_in},
              {"r_out", c.r_out},
              {"lambda_R", c.lambda_R},
              {"margin", c.margin},
              {"displacer", c.displacer},
              {"window_lo", c.window_lo},
              {"window_hi", c.window_hi},
              {"seed", c.seed},
              {"tolerance_scale", c.tolerance_scale},
              {"workers", c.workers},
              {"out_dir", c.out_dir}};
}

/// Schema-validating parse: unknown keys and type mismatches are errors.
inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  const json defaults = config_to_json(c);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!defaults.contains(it.key())) {
      throw ConfigError("unknown config key: " + it.key());
    }
  }
  auto get = [&](const char* key, auto& slot) {
    if (!j.contains(key)) return;
    try {
      slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
  };
  get("command", c.command);
  get("n", c.n);
  get("k", c.k);
  get("r", c.r);
  get("eps_grid", c.eps_grid);
  get("T", c.T);
  get("T_max", c.T_max);
  get("T_grid", c.T_grid);
  get("reeb_s", c.reeb_s);
  get("family", c.family);
  get("steps", c.steps);
  get("samples", c.samples);
  get("a1", c.a1);
  get("a2", c.a2);
  get("r_in", c.r_in);
  get("r_out", c.r_out);
  get("lambda_R", c.lambda_R);
  get("margin", c.margin);
  get("displacer", c.displacer);
  get("window_lo", c.window_lo);
  get("window_hi", c.window_hi);
  get("seed", c.seed);
  get("tolerance_scale", c.tolerance_scale);
  get("workers", c.workers);
  get("out_dir", c.out_dir);
  if (c.n < 1 || c.n > 8) throw ConfigError("n out of range [1, 8]");
  if (c.k < 1) throw ConfigError("k must be >= 1");
  return c;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

inline void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace contactlab::io
