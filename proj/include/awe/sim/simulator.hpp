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

#ifndef AWE_SIM_SIMULATOR_HPP_
#define AWE_SIM_SIMULATOR_HPP_

#include <string>
#include <vector>

#include "awe/sim/config.hpp"

namespace awe {

struct TraceRow {
  double t = 0.0;
  // Safety-state fields.
  double s = 0.0, sigma = 0.0, h_tau = 0.0, v_a = 0.0, chi_a = 0.0,
         gamma_a = 0.0, delta_t = 0.0;
  double alpha_cmd = 0.0, mu_cmd = 0.0;
  double alpha_applied = 0.0, mu_applied = 0.0;
  int mode = 0;  // 0 = NDI, 1 = SAFETY
  double f_t_norm = 0.0, f_w_norm = 0.0, p_mech = 0.0;
  double wind_x = 0.0, wind_y = 0.0, wind_z = 0.0;  // total wind, O frame
  int s1 = 0, s2 = 0;
};

enum class SimOutcome { kCompleted, kRuptured, kOutOfEnvelope };

const char* to_string(SimOutcome o);

struct SimTables {
  hj::ValueFunction value;
  hj::ControlTable control;
};

struct SimResult {
  std::vector<TraceRow> trace;
  SimOutcome outcome = SimOutcome::kCompleted;
  double max_f_t = 0.0;          // [N] over trace rows
  double safety_fraction = 0.0;  // fraction of steps in SAFETY mode
  double mean_power = 0.0;       // [W]
  double cycles = 0.0;           // figure-eight turns covered (s wraps)
  std::string note;
};

// End-to-end fixed-step simulation: wind -> navigator -> controller
// (NDI or hybrid automaton) -> actuator lag -> coupled aircraft/tether/winch
// RK4 substeps -> logging. Terminates at the horizon, at the first trace
// sample with ||F_t|| above the rupture force, or when the aircraft leaves
// the navigation band / lookup envelope. Numerical failures (stall,
// singularity, divergence) throw std::runtime_error with the failure time.
SimResult simulate(const RunConfig& cfg, const SimTables* tables = nullptr);

// First-order actuator lag with slew-rate limits; tau_act -> 0 passes the
// command through (up to the rate limits).
struct ActuatorState {
  double alpha = 0.0;
  double mu = 0.0;
};
Control actuator_delay(const Control& cmd, ActuatorState& st, double dt,
                       double tau_act, double alpha_rate_max,
                       double mu_rate_max);

// UTF-8 CSV with a fixed header row matching TraceRow field order and 17
// significant digits for floats.
void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace_csv(const std::string& path);

}  // namespace awe

#endif  // AWE_SIM_SIMULATOR_HPP_
