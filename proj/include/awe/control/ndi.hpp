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

#ifndef AWE_CONTROL_NDI_HPP_
#define AWE_CONTROL_NDI_HPP_

#include "awe/plant.hpp"
#include "awe/safety_model.hpp"

namespace awe {

struct NdiGains {
  double k_p_chi = 1.0;    // [1/s]
  double k_p_gamma = 1.0;  // [1/s]
};

// Benchmark-controller actuation box. The safety synthesis may use a wider
// set (notably a lower lift floor for force dumping).
struct ControlLimits {
  double alpha_min = 0.0;
  double alpha_max = 0.15;
  double mu_min = -1.05;
  double mu_max = 1.05;
};

struct NdiCommandInput {
  double chi_cmd = 0.0;        // [rad], O frame
  double gamma_cmd = 0.0;      // [rad], O frame
  double chi_dot_cmd = 0.0;    // [rad/s]
  double gamma_dot_cmd = 0.0;  // [rad/s]
};

struct EstimatedRates {
  double chi_dot_est = 0.0;
  double gamma_dot_est = 0.0;
};

struct NdiResult {
  Control u;
  bool saturated = false;  // inversion hit the control limits
};

// Course/path rates of the simplified dynamics under the radially projected
// measured tether force and gravity (the non-control drift the NDI cancels).
EstimatedRates ndi_estimated_rates(const SphericalPos& pos, double v_a,
                                   double chi_a, double gamma_a,
                                   double f_t_norm, double xi,
                                   const AircraftParams& ac);

// Dynamic inversion: pseudo-controls from the tracking errors, bank angle
// in closed form from the channel ratio, angle of attack by bisection on
// the path channel (1e-6 rad), outputs clamped to the control limits.
NdiResult ndi_command(double v_a, double chi_a, double gamma_a,
                      const NdiCommandInput& cmd, const EstimatedRates& est,
                      const NdiGains& gains, const AircraftParams& ac,
                      const ControlLimits& lim);

}  // namespace awe

#endif  // AWE_CONTROL_NDI_HPP_
