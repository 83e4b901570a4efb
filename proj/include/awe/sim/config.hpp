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

#ifndef AWE_SIM_CONFIG_HPP_
#define AWE_SIM_CONFIG_HPP_

#include <string>

#include "awe/control/ndi.hpp"
#include "awe/control/switching.hpp"
#include "awe/hj/grid.hpp"
#include "awe/safety_model.hpp"

namespace awe {

struct SynthConfig {
  double cfl = 0.5;
  double dt_max = 0.05;
  double horizon = 0.1;  // [s]
};

struct SimConfig {
  double dt_ctrl = 0.01;        // [s] controller/logging step
  double duration = 50.0;       // [s]
  double s0 = 0.0;              // initial curve parameter
  double sigma0 = 0.0;          // [m]
  double h_tau0 = 250.0;        // [m]
  double v_a0 = 27.0;           // [m/s]
  double pretension = 1600.0;   // [N] initial chain tension
  double tau_act = 0.03;        // [s] actuator lag
  double alpha_rate_max = 2.0;  // [rad/s]
  double mu_rate_max = 2.5;     // [rad/s]
  double substep_factor = 0.1;  // fraction of the 2/omega_max stability cap
  double sigma_nav_max = 200.0; // [m] navigation band before out-of-envelope
  bool turbulence = true;
  bool hybrid = false;
  bool retraction = false;
  double reel_in_speed = 2.0;   // [m/s] placeholder retraction reel rate
  double l_min = 240.0;         // [m] retraction -> traction threshold
  double l_max = 400.0;         // [m] traction -> retraction threshold
};

struct PowerConfig {
  double c_lift = 1.0;
  double c_drag = 0.1;
  double c_drag_tether = 0.05;
};

struct RunConfig {
  SafetyModelParams model;   // curve, aircraft, tether, wind, bounds, U
  ControlLimits limits;
  WinchParams winch;
  NdiGains ndi;
  SwitchConfig sw;
  hj::Grid grid;             // 7-axis synthesis grid
  SynthConfig synth;
  SimConfig sim;
  PowerConfig power;

  RunConfig();
};

// Parses the sectioned key/value run-configuration text. Grammar:
//   - '#' starts a comment; blank lines ignored
//   - '[section]' headers; 'key = value' entries inside a section
//   - values are scalars, booleans (true/false/on/off), triples
//     'c0 c1 c2' for the aero polynomials, or axis specs
//     'N min max [periodic]' in the [grid] section
// Unknown sections or keys are errors. All keys are optional; defaults
// above apply.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Reference config text with every key at its default value.
std::string default_config_text();

}  // namespace awe

#endif  // AWE_SIM_CONFIG_HPP_
