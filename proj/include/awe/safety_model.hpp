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

#ifndef AWE_SAFETY_MODEL_HPP_
#define AWE_SAFETY_MODEL_HPP_

#include <vector>

#include <Eigen/Dense>

#include "awe/booth.hpp"
#include "awe/plant.hpp"
#include "awe/tether.hpp"
#include "awe/wind.hpp"

namespace awe {

using Vector7d = Eigen::Matrix<double, 7, 1>;

// Synthesis state x = [s, sigma, h_tau, v_a, chi_a, gamma_a, delta_t].
struct SafetyState {
  double s = 0.0;        // [rad] curve parameter
  double sigma = 0.0;    // [m] signed distance to the curve
  double h_tau = 250.0;  // [m]
  double v_a = 30.0;     // [m/s]
  double chi_a = 0.0;    // [rad]
  double gamma_a = 0.0;  // [rad]
  double delta_t = 0.0;  // [m] final-segment stretch

  Vector7d vec() const;
  static SafetyState from_vec(const Vector7d& v);
};

struct Control {
  double alpha_a = 0.0;  // [rad]
  double mu_a = 0.0;     // [rad]
};

struct Disturbance {
  double d_delta_t = 0.0;            // [m/s]
  Vector3d d_turb = Vector3d::Zero();  // [m/s], W frame
};

struct DisturbanceBounds {
  double d_delta_t_max = 0.005;  // [m/s]
  double d_turb_max = 4.0;       // [m/s] per component
};

// Discrete control set spanning the compact input box.
struct ControlGrid {
  std::vector<double> alphas;
  std::vector<double> mus;

  static ControlGrid uniform(double alpha_min, double alpha_max,
                             double mu_min, double mu_max, int n_alpha,
                             int n_mu);
};

struct SafetyModelParams {
  BoothCurve curve;
  AircraftParams aircraft;
  TetherParams tether;
  WindParams wind;
  DisturbanceBounds dist;
  ControlGrid ctrl = ControlGrid::uniform(-0.10, 0.15, -1.05, 1.05, 15, 15);
  double f_rupture = 1870.0;  // [N]
  // Avoid-set scale: h = (||F_t|| - F_rupture) / (h_weight * F_rupture).
  // Weights below one give the force boundary primacy over the alignment
  // objective in the blended terminal value.
  double h_weight = 1.0;
  double eps_align = 0.087;   // [rad] alignment tolerance in l
  double delta0 = 25.0;       // [m] guidance blend length
  double sigma_max = 60.0;    // [m] gamma band half-width
};

// The 7-state synthesis model. All methods are pure; the model itself is
// immutable after construction.
class SafetyModel {
 public:
  explicit SafetyModel(SafetyModelParams params);

  const SafetyModelParams& params() const { return params_; }

  // Control-affected rows (v_a, chi_a, gamma_a); zero elsewhere.
  Vector3d f_hat(const SafetyState& x, const Control& u) const;

  // Disturbance and drift rows: kinematics in the Gamma frame, tether and
  // gravity force rows, and the stretch-rate disturbance channel.
  Vector7d f_c(const SafetyState& x, const Disturbance& d) const;

  // Monolithic dynamics, assembled along the aircraft-EOM route (combined
  // force sum); equals f_hat + f_c.
  Vector7d dynamics(const SafetyState& x, const Control& u,
                    const Disturbance& d) const;

  // argmin over the control grid of q^T f_hat; ties resolved toward the
  // lowest (alpha index, mu index).
  Control optimal_control(const SafetyState& x, const Vector7d& q) const;
  Control optimal_control(const SafetyState& x, const Vector7d& q,
                          const ControlGrid& grid) const;

  // argmax over the disturbance box of q^T f_c (attained at a corner; a
  // zero coefficient resolves to the + corner).
  Disturbance optimal_disturbance(const SafetyState& x,
                                  const Vector7d& q) const;

  // H(x, q) = min_u q^T f_hat + max_d q^T f_c.
  double hamiltonian(const SafetyState& x, const Vector7d& q) const;

  // Avoid-set function (||F_t|| - F_rupture)/F_rupture; avoid = {h > 0}.
  double h_fn(const SafetyState& x) const;

  // Reach-set function (max wrapped angle error - eps_align)/pi;
  // reach = {l <= 0}.
  double l_fn(const SafetyState& x) const;

  // Per-axis bound on |f_i| over the control grid and disturbance box.
  Vector7d speed_bounds(const SafetyState& x) const;

  // Base (zero-turbulence) kinematic velocity in the aircraft tau frame and
  // the associated position. Exposed for the tether-force construction.
  Vector3d base_velocity_tau(const SafetyState& x,
                             const SphericalPos& pos) const;

  SphericalPos position_of(const SafetyState& x) const;
  double arc_length(double h_tau) const;

 private:
  struct AlphaTable {
    std::vector<double> a, b, c;  // scaled Cx, Cz, Cy at each grid alpha
    std::vector<double> cos_a, sin_a;
    std::vector<double> cos_mu, sin_mu;
  };

  double straight_tension(const SafetyState& x, const SphericalPos& pos,
                          const Vector3d& v_k0_tau) const;

  SafetyModelParams params_;
  AlphaTable table_;
};

}  // namespace awe

#endif  // AWE_SAFETY_MODEL_HPP_
