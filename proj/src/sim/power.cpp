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

#include "awe/sim/power.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace awe {

double power_mech(double omega_w, double r_w, double f_w_norm) {
  return r_w * omega_w * f_w_norm;
}

double harvesting_factor(double c_lift, double c_drag, double c_drag_tether) {
  const double drag = c_drag + c_drag_tether;
  if (drag <= 0.0) throw std::domain_error("harvesting factor: zero drag");
  return 4.0 / 27.0 * c_lift * c_lift * c_lift / (drag * drag);
}

double efficiency_factor(double f_drag, double f_a, double f_g, double psi0) {
  if (f_a <= 0.0)
    throw std::domain_error("efficiency factor: aerodynamic force <= 0");
  const double arg =
      f_drag / f_a * std::sin(psi0) + f_g / f_a * std::cos(psi0);
  if (arg < -1.0 || arg > 1.0)
    throw std::domain_error("efficiency factor: infeasible force balance");
  const double c = std::cos(psi0 + std::asin(arg));
  return c * c * c;
}

double power_bound(double e, double a_eff, double zeta, double rho,
                   double v_w) {
  return e * a_eff * zeta * 0.5 * rho * v_w * v_w * v_w;
}

PowerReport compute_power_report(const std::vector<TraceRow>& trace,
                                 const RunConfig& cfg) {
  if (trace.size() < 2)
    throw std::invalid_argument("power report: need at least two rows");
  const auto& ac = cfg.model.aircraft;

  PowerReport rep;
  rep.rows = static_cast<int>(trace.size());
  rep.duration = trace.back().t - trace.front().t;

  double p_acc = 0.0, wind_acc = 0.0, fa_acc = 0.0, fd_acc = 0.0;
  int safety = 0;
  for (const TraceRow& r : trace) {
    p_acc += r.p_mech;
    wind_acc += std::sqrt(r.wind_x * r.wind_x + r.wind_y * r.wind_y +
                          r.wind_z * r.wind_z);
    // Aerodynamic force recomputed from the applied angle of attack.
    const AeroCoeffs c = aero_coeffs(r.alpha_applied, ac);
    const double qbar = 0.5 * ac.rho * ac.s_ref * r.v_a * r.v_a;
    fa_acc += qbar * std::sqrt(c.cx * c.cx + c.cy * c.cy + c.cz * c.cz);
    // Drag is minus the x component of the force in the A frame.
    const double ca = std::cos(r.alpha_applied), sa = std::sin(r.alpha_applied);
    fd_acc += -qbar * (c.cx * ca + c.cz * sa);
    if (r.mode == 1) ++safety;
    rep.max_f_t = std::max(rep.max_f_t, r.f_t_norm);
  }
  const double inv = 1.0 / static_cast<double>(trace.size());
  rep.mean_power = p_acc * inv;
  rep.energy = rep.mean_power * rep.duration;
  rep.mean_wind_speed = wind_acc * inv;
  rep.mean_f_a = fa_acc * inv;
  rep.mean_f_drag = fd_acc * inv;
  rep.f_g = ac.m_a * ac.g;
  rep.safety_fraction = static_cast<double>(safety) * inv;

  rep.zeta = harvesting_factor(cfg.power.c_lift, cfg.power.c_drag,
                               cfg.power.c_drag_tether);
  rep.efficiency = efficiency_factor(rep.mean_f_drag, rep.mean_f_a, rep.f_g,
                                     cfg.model.curve.psi0);
  rep.bound = power_bound(rep.efficiency, ac.s_ref, rep.zeta, ac.rho,
                          rep.mean_wind_speed);
  return rep;
}

std::string power_report_json(const PowerReport& r) {
  std::ostringstream out;
  out.precision(12);
  out << "{\n"
      << "  \"mean_power_w\": " << r.mean_power << ",\n"
      << "  \"energy_j\": " << r.energy << ",\n"
      << "  \"zeta\": " << r.zeta << ",\n"
      << "  \"efficiency_factor\": " << r.efficiency << ",\n"
      << "  \"power_bound_w\": " << r.bound << ",\n"
      << "  \"mean_wind_speed_ms\": " << r.mean_wind_speed << ",\n"
      << "  \"mean_aero_force_n\": " << r.mean_f_a << ",\n"
      << "  \"mean_drag_force_n\": " << r.mean_f_drag << ",\n"
      << "  \"gravity_force_n\": " << r.f_g << ",\n"
      << "  \"duration_s\": " << r.duration << ",\n"
      << "  \"max_tether_force_n\": " << r.max_f_t << ",\n"
      << "  \"safety_fraction\": " << r.safety_fraction << ",\n"
      << "  \"rows\": " << r.rows << "\n"
      << "}\n";
  return out.str();
}

}  // namespace awe
