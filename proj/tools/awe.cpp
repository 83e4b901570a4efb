// Copyright 2026 The awe-reach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "awe/hj/solver.hpp"
#include "awe/hj/table_io.hpp"
#include "awe/sim/config.hpp"
#include "awe/sim/power.hpp"
#include "awe/sim/simulator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitSafety = 3;

void error_line(const char* category, const std::string& msg) {
  std::cerr << "error: " << category << ": " << msg << "\n";
}

int run_synth(const std::string& config_path, const std::string& value_path,
              const std::string& control_path, bool quiet) {
  const awe::RunConfig cfg = awe::load_run_config(config_path);
  awe::SafetyModel model(cfg.model);
  awe::hj::SafetyNodeDynamics dyn(model, cfg.grid);

  awe::hj::SolveOptions opts;
  opts.cfl = cfg.synth.cfl;
  opts.dt_max = cfg.synth.dt_max;
  if (!quiet) {
    opts.observer = [&](int step, const awe::hj::ValueFunction& v) {
      std::printf("step %3d  t = %+.5f s  V in [%.4f, %.4f]\n", step + 1,
                  v.time, v.values.minCoeff(), v.values.maxCoeff());
      std::fflush(stdout);
    };
  }
  const awe::hj::SolveResult res =
      awe::hj::solve_brs(dyn, cfg.synth.horizon, opts);
  awe::hj::save_value_function(value_path, res.value);
  awe::hj::save_control_table(control_path, res.controls);
  if (!quiet) {
    std::printf("synth: %d steps, %zu nodes, value -> %s, control -> %s\n",
                res.steps, res.value.grid.size(), value_path.c_str(),
                control_path.c_str());
  }
  return kExitOk;
}

int run_simulate(const std::string& config_path, const std::string& value_path,
                 const std::string& control_path,
                 const std::string& trace_path,
                 const std::string& report_path, int hybrid_override) {
  awe::RunConfig cfg = awe::load_run_config(config_path);
  if (hybrid_override >= 0) cfg.sim.hybrid = hybrid_override != 0;

  awe::SimTables tables;
  const awe::SimTables* tables_ptr = nullptr;
  if (cfg.sim.hybrid) {
    if (value_path.empty() || control_path.empty()) {
      error_line("usage", "hybrid mode requires --value and --control tables");
      return kExitUsage;
    }
    tables.value = awe::hj::load_value_function(value_path);
    tables.control = awe::hj::load_control_table(control_path);
    tables_ptr = &tables;
  }

  const awe::SimResult res = awe::simulate(cfg, tables_ptr);
  if (!trace_path.empty()) awe::write_trace_csv(trace_path, res.trace);
  if (!report_path.empty()) {
    const awe::PowerReport rep = awe::compute_power_report(res.trace, cfg);
    std::ofstream out(report_path, std::ios::trunc);
    out << awe::power_report_json(rep);
  }
  std::printf(
      "simulate: outcome=%s t=%.2fs cycles=%.2f max|F_t|=%.1fN "
      "safety=%.1f%% mean P=%.1fW\n",
      awe::to_string(res.outcome),
      res.trace.empty() ? 0.0 : res.trace.back().t, res.cycles, res.max_f_t,
      100.0 * res.safety_fraction, res.mean_power);
  if (!res.note.empty()) std::printf("simulate: %s\n", res.note.c_str());
  if (res.outcome == awe::SimOutcome::kRuptured) {
    error_line("safety", "tether rupture");
    return kExitSafety;
  }
  return kExitOk;
}

int run_inspect(const std::string& path, const std::string& slice,
                const std::string& out_path) {
  // Try the value magic first, then the control magic.
  awe::hj::ValueFunction vf;
  bool is_value = true;
  try {
    vf = awe::hj::load_value_function(path);
  } catch (const std::runtime_error&) {
    is_value = false;
  }
  awe::hj::ControlTable ct;
  if (!is_value) ct = awe::hj::load_control_table(path);
  const awe::hj::Grid& grid = is_value ? vf.grid : ct.grid;

  static const char* kAxisNames[7] = {"s",     "sigma", "htau", "va",
                                      "chi",   "gamma", "dt"};
  std::printf("file: %s\ntype: %s\nndim: %d\nnodes: %zu\n", path.c_str(),
              is_value ? "value function (AWEVF01)" : "control table (AWECT01)",
              grid.ndim(), grid.size());
  for (int d = 0; d < grid.ndim(); ++d) {
    const awe::hj::Axis& a = grid.axis(d);
    std::printf("axis %d%s: n=%d range=[%g, %g]%s\n", d,
                grid.ndim() == 7 ? (std::string(" (") + kAxisNames[d] + ")").c_str()
                                 : "",
                a.n, a.lo, a.hi, a.periodic ? " periodic" : "");
  }
  if (is_value) {
    std::printf("horizon: %g s\nvalues: min=%g max=%g\n", vf.time,
                vf.values.minCoeff(), vf.values.maxCoeff());
  } else {
    std::printf("alpha: min=%g max=%g\nmu: min=%g max=%g\n",
                ct.alpha.minCoeff(), ct.alpha.maxCoeff(), ct.mu.minCoeff(),
                ct.mu.maxCoeff());
  }
  if (slice.empty()) return kExitOk;

  if (!is_value) {
    error_line("usage", "--slice requires a value-function file");
    return kExitUsage;
  }
  if (grid.ndim() != 7) {
    error_line("usage", "--slice requires the 7-axis synthesis grid");
    return kExitUsage;
  }

  // Parse "name=value,..." fixing five axes; the remaining two are swept.
  std::map<std::string, int> name_to_axis;
  for (int d = 0; d < 7; ++d) name_to_axis[kAxisNames[d]] = d;
  std::array<bool, 7> fixed{};
  std::array<double, 7> coord{};
  std::stringstream ss(slice);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      error_line("usage", "slice items must be name=value");
      return kExitUsage;
    }
    const std::string name = item.substr(0, eq);
    if (!name_to_axis.count(name)) {
      error_line("usage", "unknown slice axis '" + name + "'");
      return kExitUsage;
    }
    const int d = name_to_axis[name];
    fixed[d] = true;
    coord[d] = std::stod(item.substr(eq + 1));
  }
  std::vector<int> free_axes;
  for (int d = 0; d < 7; ++d)
    if (!fixed[d]) free_axes.push_back(d);
  if (free_axes.size() != 2) {
    error_line("usage", "slice must fix exactly five of the seven axes");
    return kExitUsage;
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::trunc);
    if (!file) {
      error_line("runtime", "cannot open " + out_path);
      return kExitRuntime;
    }
    out = &file;
  }
  *out << kAxisNames[free_axes[0]] << "," << kAxisNames[free_axes[1]]
       << ",value\n";
  const awe::hj::Axis& a0 = grid.axis(free_axes[0]);
  const awe::hj::Axis& a1 = grid.axis(free_axes[1]);
  char buf[128];
  for (int i = 0; i < a0.n; ++i) {
    for (int j = 0; j < a1.n; ++j) {
      coord[free_axes[0]] = a0.coord(i);
      coord[free_axes[1]] = a1.coord(j);
      const double value = awe::hj::interpolate(vf, coord);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n",
                    coord[free_axes[0]], coord[free_axes[1]], value);
      *out << buf;
    }
  }
  return kExitOk;
}

int run_power(const std::string& trace_path, const std::string& config_path,
              const std::string& report_path) {
  const awe::RunConfig cfg = awe::load_run_config(config_path);
  const std::vector<awe::TraceRow> rows = awe::read_trace_csv(trace_path);
  const awe::PowerReport rep = awe::compute_power_report(rows, cfg);
  const std::string json = awe::power_report_json(rep);
  if (report_path.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(report_path, std::ios::trunc);
    if (!out) {
      error_line("runtime", "cannot open " + report_path);
      return kExitRuntime;
    }
    out << json;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reach-avoid safety synthesis and simulation for a "
               "ground-generation airborne wind energy system"};
  app.require_subcommand(1);

  std::string config_path, value_path, control_path, trace_path, report_path;
  std::string slice, out_path;
  bool quiet = false;
  int hybrid_override = -1;

  CLI::App* synth = app.add_subcommand(
      "synth", "Solve the reach-avoid problem and export the tables");
  synth->add_option("--config", config_path, "run configuration file")
      ->required();
  synth->add_option("--out-value", value_path, "output value-function file")
      ->required();
  synth->add_option("--out-control", control_path, "output control table")
      ->required();
  synth->add_flag("--quiet", quiet, "suppress progress output");

  CLI::App* sim = app.add_subcommand(
      "simulate", "Run the high-fidelity simulation");
  sim->add_option("--config", config_path, "run configuration file")
      ->required();
  sim->add_option("--value", value_path, "value-function table");
  sim->add_option("--control", control_path, "control table");
  sim->add_option("--trace", trace_path, "output trace CSV");
  sim->add_option("--report", report_path, "output power report JSON");
  sim->add_flag_callback("--hybrid", [&] { hybrid_override = 1; },
                         "force hybrid mode on");
  sim->add_flag_callback("--ndi-only", [&] { hybrid_override = 0; },
                         "force plain NDI mode");

  CLI::App* inspect = app.add_subcommand(
      "inspect", "Dump a table file header or export a 2D slice");
  std::string inspect_file;
  inspect->add_option("file", inspect_file, "table file")->required();
  inspect->add_option("--slice", slice,
                      "fixed coordinates, e.g. htau=250,va=31,chi=-0.447,"
                      "gamma=0.5205,dt=0.0003");
  inspect->add_option("--out", out_path, "slice CSV output (default stdout)");

  CLI::App* power = app.add_subcommand(
      "power", "Compute the power report from a trace");
  power->add_option("--trace", trace_path, "trace CSV")->required();
  power->add_option("--config", config_path, "run configuration file")
      ->required();
  power->add_option("--report", report_path, "output JSON (default stdout)");

  CLI::App* config = app.add_subcommand(
      "config", "Print a reference configuration with all defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kExitOk;  // --help
    error_line("usage", e.what());
    return kExitUsage;
  }

  try {
    if (synth->parsed())
      return run_synth(config_path, value_path, control_path, quiet);
    if (sim->parsed())
      return run_simulate(config_path, value_path, control_path, trace_path,
                          report_path, hybrid_override);
    if (inspect->parsed()) return run_inspect(inspect_file, slice, out_path);
    if (power->parsed())
      return run_power(trace_path, config_path, report_path);
    if (config->parsed()) {
      std::cout << awe::default_config_text();
      return kExitOk;
    }
  } catch (const std::exception& e) {
    error_line("runtime", e.what());
    return kExitRuntime;
  }
  error_line("usage", "no subcommand");
  return kExitUsage;
}
