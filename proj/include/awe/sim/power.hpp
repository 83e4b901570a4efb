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

#ifndef AWE_SIM_POWER_HPP_
#define AWE_SIM_POWER_HPP_

#include <string>
#include <vector>

#include "awe/sim/simulator.hpp"

namespace awe {

// Mechanical power at the drum: reel-out speed times ground tether force.
// Negative while reeling in under tension.
double power_mech(double omega_w, double r_w, double f_w_norm);

// zeta = (4/27) C_L^3 / (C_D + C_D,tether)^2. Throws on zero total drag.
double harvesting_factor(double c_lift, double c_drag, double c_drag_tether);

// e = cos^3(psi0 + asin(F_drag/F_a sin(psi0) + F_g/F_a cos(psi0))).
// Throws when the force balance is infeasible (arcsine argument outside
// [-1, 1]).
double efficiency_factor(double f_drag, double f_a, double f_g, double psi0);

// P_tilde = e A_eff zeta 1/2 rho |v_W|^3.
double power_bound(double e, double a_eff, double zeta, double rho,
                   double v_w);

struct PowerReport {
  double mean_power = 0.0;       // [W]
  double energy = 0.0;           // [J]
  double zeta = 0.0;
  double efficiency = 0.0;       // e
  double bound = 0.0;            // P_tilde [W]
  double mean_wind_speed = 0.0;  // [m/s]
  double mean_f_a = 0.0;         // [N]
  double mean_f_drag = 0.0;      // [N]
  double f_g = 0.0;              // [N]
  double duration = 0.0;         // [s]
  double max_f_t = 0.0;          // [N]
  double safety_fraction = 0.0;
  int rows = 0;
};

// Report from a trace: mean mechanical power, the harvesting factor from
// the configured polar, the efficiency factor from run-averaged forces, and
// the resulting theoretical bound (A_eff = S_ref).
PowerReport compute_power_report(const std::vector<TraceRow>& trace,
                                 const RunConfig& cfg);

std::string power_report_json(const PowerReport& report);

}  // namespace awe

#endif  // AWE_SIM_POWER_HPP_
