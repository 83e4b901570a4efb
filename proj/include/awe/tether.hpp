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

#ifndef AWE_TETHER_HPP_
#define AWE_TETHER_HPP_

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "awe/frames.hpp"

namespace awe {

struct TetherParams {
  int n = 5;             // particle count (n+1 segments)
  double k = 5.0e4;      // [N/m] segment spring constant
  double c = 10.0;       // [N s/m] segment damping constant
  double m_t = 0.8;      // [kg] per-particle mass
  double d_t = 0.004;    // [m] tether diameter
  double c_dt = 1.0;     // segment drag coefficient
  double rho = 1.225;    // [kg/m^3] air density
  double g = 9.81;       // [m/s^2]
};

// Hooke spring-damper force transmitted by a segment with span s (from the
// lower to the upper node) and relative velocity s_v, at rest length l_s.
// Signed: a compressed segment yields a negative tension along s_hat.
// Throws std::domain_error on a near-zero-length segment.
Vector3d segment_tension(const Vector3d& s, const Vector3d& s_v,
                         double rest_length, const TetherParams& p);

// Scalar tension of the same law (positive = taut).
double segment_tension_scalar(const Vector3d& s, const Vector3d& s_v,
                              double rest_length, const TetherParams& p);

// Cylinder drag on a segment from the apparent air velocity v_air: only the
// component perpendicular to the segment acts, on the projected area
// d_t * |s - (s . v_hat) v_hat|. Near-zero v_air returns zero.
Vector3d segment_drag(const Vector3d& s, const Vector3d& v_air,
                      const TetherParams& p);

// Lumped-mass tether state: n particles, W frame (anchor at the origin).
struct TetherState {
  std::vector<Vector3d> p;  // positions [m]
  std::vector<Vector3d> v;  // velocities [m/s]
};

struct TetherDerivatives {
  std::vector<Vector3d> p_dot;
  std::vector<Vector3d> v_dot;
  Vector3d aircraft_force;   // force the tether exerts on the aircraft [N]
  double f_t_norm = 0.0;     // tension magnitude of the final segment [N]
  double f_w_norm = 0.0;     // tension magnitude at the ground anchor [N]
};

// Wind sampled at a particle altitude (W-frame z), W frame.
using WindAtHeight = std::function<Vector3d(double altitude_m)>;

// Particle derivatives of the chain between the anchor and the aircraft.
// rest_length is the per-segment unstretched length l_s = l_tether/(n+1).
// Slack segments transmit no force (tension-only chain); gravity can be
// disabled for conservation experiments via p.g = 0.
TetherDerivatives tether_derivatives(const TetherState& st,
                                     const Vector3d& aircraft_p,
                                     const Vector3d& aircraft_v,
                                     double rest_length,
                                     const WindAtHeight& wind,
                                     const TetherParams& p);

// Straight-tether abstraction: particles evenly spaced on the ray to the
// aircraft, final-segment stretch tracked by the state delta_t. Returns the
// force acting on the aircraft (inward along -r_hat when taut; zero when
// slack). rates = (lambda_dot, phi_dot, h_tau_dot).
Vector3d straight_tether_force(const SphericalPos& pos, double delta_t,
                               const Vector3d& rates, const TetherParams& p);

// Scalar tension of the straight model (max of 0 and the Hooke value).
double straight_tether_tension(const SphericalPos& pos, double delta_t,
                               const Vector3d& rates, const TetherParams& p);

// Stretch rate of the final segment: radial relative speed minus the
// reel-out contribution r_w * theta_dot_w / (n+1).
double delta_t_rate(const Vector3d& s_last, const Vector3d& s_v_last,
                    double theta_dot_w, double r_w, int n);

}  // namespace awe

#endif  // AWE_TETHER_HPP_
