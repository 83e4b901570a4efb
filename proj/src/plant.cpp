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

#include "awe/plant.hpp"

#include <cmath>
#include <stdexcept>

namespace awe {

AeroCoeffs aero_coeffs(double alpha, const AircraftParams& p) {
  AeroCoeffs out;
  out.cx = p.cx0(alpha) + p.cx_de(alpha) * p.delta_e;
  out.cy = p.cy_da(alpha) * p.delta_a + p.cy_dr(alpha) * p.delta_r;
  out.cz = p.cz0(alpha) + p.cz_de(alpha) * p.delta_e;
  out.extrapolated = alpha < p.alpha_valid_min || alpha > p.alpha_valid_max;
  return out;
}

Vector3d aero_force_b(double alpha, double v_a, const AircraftParams& p) {
  if (v_a <= 0.0) throw std::domain_error("aero_force: v_a must be > 0");
  const AeroCoeffs c = aero_coeffs(alpha, p);
  return 0.5 * p.rho * p.s_ref * v_a * v_a * Vector3d(c.cx, c.cy, c.cz);
}

Vector3d gravity_force_o(double m_a, double g) {
  if (m_a <= 0.0) throw std::domain_error("gravity_force: m_a must be > 0");
  return Vector3d(0.0, 0.0, m_a * g);
}

Vector3d polar_rates(const Vector3d& v_k_tau, const SphericalPos& pos) {
  const double cp = std::cos(pos.phi);
  if (std::abs(cp) < 1e-9)
    throw std::domain_error("polar_rates: singular at the pole");
  if (pos.h_tau <= 0.0) throw std::domain_error("polar_rates: h_tau <= 0");
  return Vector3d(v_k_tau.y() / (cp * pos.h_tau), v_k_tau.x() / pos.h_tau,
                  -v_k_tau.z());
}

Vector3d kinematic_velocity_o(double v_a, double chi, double gamma,
                              const Vector3d& v_wind_o) {
  const Matrix3d m_abar_o = rotation_abar_o(chi, gamma);
  return m_abar_o.transpose() * Vector3d(v_a, 0.0, 0.0) + v_wind_o;
}

Vector6d aircraft_rates(const Vector6d& state, double alpha, double mu,
                        const Vector3d& f_t_o, const Vector3d& v_wind_o,
                        double xi, const AircraftParams& p) {
  SphericalPos pos{state[0], state[1], state[2]};
  const double v_a = state[3], chi = state[4], gamma = state[5];
  if (v_a <= p.v_stall_floor)
    throw std::domain_error("aircraft_rates: below stall floor");
  const double cg = std::cos(gamma);
  if (std::abs(cg) < 1e-6)
    throw std::domain_error("aircraft_rates: path angle singularity");

  const Matrix3d m_abar_o = rotation_abar_o(chi, gamma);
  const Matrix3d m_abar_a = rotation_abar_a(mu);
  const Matrix3d m_ab = rotation_ab(alpha, 0.0);

  const Vector3d f_sum_abar =
      m_abar_o * (gravity_force_o(p.m_a, p.g) + f_t_o) +
      m_abar_a * (m_ab * aero_force_b(alpha, v_a, p));

  Vector6d rates;
  rates[3] = f_sum_abar.x() / p.m_a;
  rates[4] = f_sum_abar.y() / (p.m_a * v_a * cg);
  rates[5] = -f_sum_abar.z() / (p.m_a * v_a);

  const Vector3d v_k_o = kinematic_velocity_o(v_a, chi, gamma, v_wind_o);
  const Matrix3d m_tau_w = rotation_tau_w(pos.lambda, pos.phi);
  const Vector3d v_k_tau = m_tau_w * (rotation_ow(xi).transpose() * v_k_o);
  rates.head<3>() = polar_rates(v_k_tau, pos);
  return rates;
}

Eigen::Vector2d winch_rates(const WinchState& w, double f_w_norm, double m_c,
                            const WinchParams& p) {
  Eigen::Vector2d out;
  out[0] = w.omega;
  out[1] = (p.r_w * f_w_norm - p.nu_w * w.omega + m_c) / p.j_w;
  return out;
}

double winch_pi(double f_w_norm, double f_ref, PiState& st, double dt,
                const WinchParams& p) {
  if (dt <= 0.0) throw std::domain_error("winch_pi: dt must be > 0");
  const double e = f_ref - f_w_norm;
  st.integral += e * dt;
  double m_c = p.kp * e + p.ki * st.integral;
  if (m_c > p.m_c_max) {
    m_c = p.m_c_max;
    st.integral -= e * dt;  // clamping anti-windup
  } else if (m_c < -p.m_c_max) {
    m_c = -p.m_c_max;
    st.integral -= e * dt;
  }
  return m_c;
}

}  // namespace awe
