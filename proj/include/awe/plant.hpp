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

#ifndef AWE_PLANT_HPP_
#define AWE_PLANT_HPP_

#include <Eigen/Dense>

#include "awe/frames.hpp"

namespace awe {

using Vector6d = Eigen::Matrix<double, 6, 1>;

// Quadratic polynomial c0 + c1*x + c2*x^2.
struct Poly2 {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double operator()(double x) const { return c0 + (c1 + c2 * x) * x; }
};

struct AircraftParams {
  double m_a = 14.0;    // [kg]
  double s_ref = 3.0;   // [m^2]
  double rho = 1.225;   // [kg/m^3]
  double g = 9.81;      // [m/s^2]

  // Body-frame coefficient polynomials in angle of attack [rad].
  Poly2 cx0{-0.12, 0.30, -1.5};
  Poly2 cx_de{0.0, 0.0, 0.0};
  Poly2 cy_da{0.0, 0.0, 0.0};
  Poly2 cy_dr{0.0, 0.0, 0.0};
  Poly2 cz0{-0.47, -4.76, 0.0};
  Poly2 cz_de{0.0, 0.0, 0.0};

  // Fixed surface deflections [rad].
  double delta_a = 0.0;
  double delta_e = 0.0;
  double delta_r = 0.0;

  // Polynomial validity range for the angle of attack [rad].
  double alpha_valid_min = -0.35;
  double alpha_valid_max = 0.52;

  double v_stall_floor = 5.0;  // [m/s]
};

struct AeroCoeffs {
  double cx = 0.0, cy = 0.0, cz = 0.0;
  bool extrapolated = false;  // alpha outside the polynomial validity range
};

AeroCoeffs aero_coeffs(double alpha, const AircraftParams& p);

// (F_a)_B = 1/2 rho S_ref v_a^2 [cx, cy, cz].
Vector3d aero_force_b(double alpha, double v_a, const AircraftParams& p);

// (F_g)_O = [0, 0, m g].
Vector3d gravity_force_o(double m_a, double g = 9.81);

// Position rates (lambda_dot, phi_dot, h_tau_dot) from the kinematic
// velocity in the tau frame. Throws near the poles.
Vector3d polar_rates(const Vector3d& v_k_tau, const SphericalPos& pos);

// Aircraft point-mass state: (lambda, phi, h_tau, v_a, chi_a, gamma_a).
// F_t_O is the tether force acting on the aircraft in the O frame,
// v_wind_O the total wind. Returns the six state rates.
Vector6d aircraft_rates(const Vector6d& state, double alpha, double mu,
                        const Vector3d& f_t_o, const Vector3d& v_wind_o,
                        double xi, const AircraftParams& p);

// Kinematic velocity (Eq. of the velocity triangle) in the O frame.
Vector3d kinematic_velocity_o(double v_a, double chi, double gamma,
                              const Vector3d& v_wind_o);

// Reel-out is the positive drum direction, so tension torque enters with
// +r_w and force-raising control moments are negative; the tracking PI
// therefore uses negative gains.
struct WinchParams {
  double j_w = 0.5;     // [kg m^2] drum inertia
  double r_w = 0.2;     // [m] drum radius
  double nu_w = 50.0;   // [N m s] viscous friction (includes generator load)
  double f_ref = 1600;  // [N] tracked tether force
  double kp = -2.0;     // PI proportional gain [N m / N]
  double ki = -8.0;     // PI integral gain [N m / (N s)]
  double m_c_max = 2000;// [N m] control moment limit
};

struct WinchState {
  double theta = 0.0;  // [rad]
  double omega = 0.0;  // [rad/s]
};

// Drum dynamics: theta_dot = omega,
// omega_dot = (r_w ||F_w|| - nu_w omega + M_c) / J_w.
Eigen::Vector2d winch_rates(const WinchState& w, double f_w_norm, double m_c,
                            const WinchParams& p);

struct PiState {
  double integral = 0.0;  // integral of the force error [N s]
};

// Force-tracking PI with clamping anti-windup. Positive error (force below
// reference) commands a reel-in moment.
double winch_pi(double f_w_norm, double f_ref, PiState& st, double dt,
                const WinchParams& p);

}  // namespace awe

#endif  // AWE_PLANT_HPP_
