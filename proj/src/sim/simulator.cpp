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

#include "awe/sim/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "awe/control/ndi.hpp"
#include "awe/control/switching.hpp"
#include "awe/sim/power.hpp"

namespace awe {

const char* to_string(SimOutcome o) {
  switch (o) {
    case SimOutcome::kCompleted:
      return "completed";
    case SimOutcome::kRuptured:
      return "ruptured";
    case SimOutcome::kOutOfEnvelope:
      return "out-of-envelope";
  }
  return "unknown";
}

Control actuator_delay(const Control& cmd, ActuatorState& st, double dt,
                       double tau_act, double alpha_rate_max,
                       double mu_rate_max) {
  if (dt <= 0.0) throw std::domain_error("actuator: dt must be > 0");
  const double blend = tau_act > 1e-12 ? 1.0 - std::exp(-dt / tau_act) : 1.0;
  auto advance = [&](double cur, double target, double rate_max) {
    double step = blend * (target - cur);
    const double cap = rate_max * dt;
    step = std::clamp(step, -cap, cap);
    return cur + step;
  };
  st.alpha = advance(st.alpha, cmd.alpha_a, alpha_rate_max);
  st.mu = advance(st.mu, cmd.mu_a, mu_rate_max);
  return Control{st.alpha, st.mu};
}

namespace {

struct PlantForces {
  double f_t_norm = 0.0;
  double f_w_norm = 0.0;
};

class PlantModel {
 public:
  PlantModel(const RunConfig& cfg, double l_tether0)
      : cfg_(cfg), l_tether0_(l_tether0) {}

  double tether_length(double theta_w) const {
    return l_tether0_ + cfg_.winch.r_w * theta_w;
  }
  double rest_length(double theta_w) const {
    return tether_length(theta_w) / (cfg_.model.tether.n + 1);
  }

  // Full derivative under held controls, wind, and winch moment.
  Eigen::VectorXd derivative(const Eigen::VectorXd& y, const Control& u,
                             const Vector3d& wind_o, double m_c,
                             PlantForces* forces) const {
    const auto& tp = cfg_.model.tether;
    const int n = tp.n;
    const SphericalPos pos{y[0], y[1], y[2]};
    const Matrix3d m_ow = rotation_ow(cfg_.model.wind.xi);

    const Vector3d p_ac_w = cart_from_spherical(pos);
    const Vector3d v_k_o =
        kinematic_velocity_o(y[3], y[4], y[5], wind_o);
    const Vector3d v_ac_w = m_ow.transpose() * v_k_o;

    TetherState ts;
    ts.p.resize(n);
    ts.v.resize(n);
    for (int i = 0; i < n; ++i) {
      ts.p[i] = y.segment<3>(8 + 6 * i);
      ts.v[i] = y.segment<3>(8 + 6 * i + 3);
    }
    const WindParams& wp = cfg_.model.wind;
    auto shear_w = [&](double alt) {
      // Tether sees shear only, sampled at the particle altitude.
      const double mag = wind_shear_magnitude(std::max(alt, 0.5), wp);
      return Vector3d(mag, 0.0, 0.0);
    };
    const TetherDerivatives td = tether_derivatives(
        ts, p_ac_w, v_ac_w, rest_length(y[6]), shear_w, tp);
    if (forces) {
      forces->f_t_norm = td.f_t_norm;
      forces->f_w_norm = td.f_w_norm;
    }

    const Vector3d f_t_o = m_ow * td.aircraft_force;
    Vector6d ac_state = y.head<6>();
    const Vector6d ac_rates = aircraft_rates(
        ac_state, u.alpha_a, u.mu_a, f_t_o, wind_o, wp.xi, cfg_.model.aircraft);

    WinchState ws{y[6], y[7]};
    const Eigen::Vector2d w_rates = winch_rates(ws, td.f_w_norm, m_c,
                                                cfg_.winch);

    Eigen::VectorXd dy(y.size());
    dy.head<6>() = ac_rates;
    dy[6] = w_rates[0];
    dy[7] = w_rates[1];
    for (int i = 0; i < n; ++i) {
      dy.segment<3>(8 + 6 * i) = td.p_dot[i];
      dy.segment<3>(8 + 6 * i + 3) = td.v_dot[i];
    }
    return dy;
  }

  void rk4_step(Eigen::VectorXd& y, double dt, const Control& u,
                const Vector3d& wind_o, double m_c) const {
    const Eigen::VectorXd k1 = derivative(y, u, wind_o, m_c, nullptr);
    const Eigen::VectorXd k2 =
        derivative(y + 0.5 * dt * k1, u, wind_o, m_c, nullptr);
    const Eigen::VectorXd k3 =
        derivative(y + 0.5 * dt * k2, u, wind_o, m_c, nullptr);
    const Eigen::VectorXd k4 = derivative(y + dt * k3, u, wind_o, m_c, nullptr);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

 private:
  const RunConfig& cfg_;
  double l_tether0_;
};

}  // namespace

SimResult simulate(const RunConfig& cfg, const SimTables* tables) {
  const auto& sc = cfg.sim;
  const auto& tp = cfg.model.tether;
  const int n = tp.n;
  if (sc.hybrid && tables == nullptr)
    throw std::invalid_argument("simulate: hybrid mode requires tables");

  const BoothCurve& curve = cfg.model.curve;
  const Matrix3d m_ow = rotation_ow(cfg.model.wind.xi);

  // --- Initial conditions: on the curve, kinematic velocity along the
  // tangent so the tether sees no radial jerk at t = 0. ---
  const GammaCoord coord0{sc.s0, sc.sigma0};
  const SphericalPos pos0 = from_gamma(curve, coord0, sc.h_tau0);
  const Vector3d p0_w = cart_from_spherical(pos0);
  const Vector3d t_hat_w =
      booth_point(curve, sc.s0, sc.h_tau0).tangent.normalized();
  const Vector3d wind0_o =
      wind_shear(std::max(1e-3, p0_w.z()), cfg.model.wind);
  const Vector3d t_hat_o = m_ow * t_hat_w;

  // v_k = k t_hat, v_a = v_k - wind with |v_a| = v_a0: pick the forward root.
  const double tw = t_hat_o.dot(wind0_o);
  const double disc = tw * tw + sc.v_a0 * sc.v_a0 - wind0_o.squaredNorm();
  if (disc <= 0.0)
    throw std::invalid_argument("simulate: v_a0 below the local wind speed");
  const double k_speed = tw + std::sqrt(disc);
  const Vector3d v_air0_o = k_speed * t_hat_o - wind0_o;

  Eigen::VectorXd y = Eigen::VectorXd::Zero(8 + 6 * n);
  y[0] = pos0.lambda;
  y[1] = pos0.phi;
  y[2] = pos0.h_tau;
  y[3] = v_air0_o.norm();
  y[4] = std::atan2(v_air0_o.y(), v_air0_o.x());
  y[5] = std::asin(std::clamp(-v_air0_o.z() / v_air0_o.norm(), -1.0, 1.0));

  // Chain pre-tensioned to the requested force: unstretched length shorter
  // than the geometric distance by (n+1) * T/k.
  const double l_tether0 = sc.h_tau0 - (n + 1) * sc.pretension / tp.k;
  const Vector3d r_hat0 = p0_w / pos0.h_tau;
  const Vector3d v_ac_w0 = k_speed * t_hat_w;
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i + 1) / (n + 1);
    y.segment<3>(8 + 6 * i) = f * pos0.h_tau * r_hat0;
    // Straight-model velocity: the chain initially follows the aircraft.
    y.segment<3>(8 + 6 * i + 3) = f * v_ac_w0;
  }

  PlantModel plant(cfg, l_tether0);

  // Stability-capped tether substep.
  const double omega_max = std::sqrt(tp.k / tp.m_t);
  const double dt_cap = 0.9 * 2.0 / omega_max;
  double dt_sub = std::min(sc.substep_factor * 2.0 / omega_max, dt_cap);
  const int n_sub = std::max(1, static_cast<int>(std::ceil(sc.dt_ctrl /
                                                           dt_sub)));
  dt_sub = sc.dt_ctrl / n_sub;

  DrydenFilter dryden(cfg.model.wind);
  PiState pi;
  // Preload the integrator at the standstill torque balance so the drum
  // does not unwind at the first sample.
  if (cfg.winch.ki != 0.0)
    pi.integral = -cfg.winch.r_w * cfg.winch.f_ref / cfg.winch.ki;
  ActuatorState act{0.0, 0.0};
  ForceHistory history(cfg.sw.window);
  ControllerMode mode = ControllerMode::kNdi;
  bool retract_phase = false;

  SimResult result;
  const int steps = static_cast<int>(std::round(sc.duration / sc.dt_ctrl));
  result.trace.reserve(steps + 1);

  double prev_s = sc.s0;
  double unwrapped = 0.0;
  double energy = 0.0;
  int safety_steps = 0;
  bool act_init = false;

  for (int step = 0; step <= steps; ++step) {
    const double t = step * sc.dt_ctrl;
    const SphericalPos pos{y[0], y[1], y[2]};
    const Vector3d p_ac_w = cart_from_spherical(pos);
    const double altitude = std::max(1e-3, p_ac_w.z());

    // Wind at the aircraft: shear plus turbulence, held for this step.
    Vector3d turb_w = Vector3d::Zero();
    if (sc.turbulence) turb_w = dryden.step(sc.dt_ctrl, altitude, y[3]);
    const Vector3d wind_o =
        wind_shear(altitude, cfg.model.wind) + m_ow * turb_w;

    // Forces at the step start (measured values for control and logging).
    PlantForces forces;
    double m_c_probe = 0.0;
    plant.derivative(y, Control{act.alpha, act.mu}, wind_o, m_c_probe,
                     &forces);

    // Navigator: curve coordinates from the kinematic velocity.
    const Vector3d v_k_o = kinematic_velocity_o(y[3], y[4], y[5], wind_o);
    const Matrix3d m_tau = rotation_tau_w(pos.lambda, pos.phi);
    const Vector3d v_k_tau = m_tau * (m_ow.transpose() * v_k_o);
    GammaCoord coord;
    try {
      const std::optional<double> hint =
          step == 0 ? std::nullopt : std::optional<double>(prev_s);
      coord = to_gamma(curve, pos, v_k_tau, sc.sigma_nav_max, 1e-3, hint);
    } catch (const std::domain_error&) {
      result.outcome = SimOutcome::kOutOfEnvelope;
      result.note = "left the navigation band at t = " + std::to_string(t);
      break;
    }
    const double ds = wrap_angle(coord.s - prev_s);
    unwrapped += ds;
    prev_s = coord.s;

    const double l_s = plant.rest_length(y[6]);
    const Vector3d p_last = y.segment<3>(8 + 6 * (n - 1));
    const double delta_t = (p_ac_w - p_last).norm() - l_s;
    const SafetyState x{coord.s, coord.sigma, y[2], y[3], y[4], y[5], delta_t};

    // Guidance command and its rate along the flow.
    const CommandedAnglesNed cmd =
        commanded_angles_ned(curve, coord, pos, cfg.model.delta0,
                             cfg.model.wind.xi);
    const double l_gamma = total_arc_length(curve, y[2]);
    const GammaRates gr = gamma_rates(curve, coord, y[2], v_k_tau, l_gamma);
    const CurvePoint cp_here = booth_point(curve, coord.s, y[2]);
    // True parameter rate ds/dt (the arc-normalized rate times l/|t|).
    const double s_rate =
        gr.s_dot * l_gamma / cp_here.tangent.norm();
    const Vector3d prates = polar_rates(v_k_tau, pos);
    const double fd_dt = 1e-3;
    const GammaCoord coord2{coord.s + s_rate * fd_dt,
                            coord.sigma + gr.sigma_dot * fd_dt};
    const SphericalPos pos2{wrap_angle(pos.lambda + prates[0] * fd_dt),
                            pos.phi + prates[1] * fd_dt,
                            pos.h_tau + prates[2] * fd_dt};
    const CommandedAnglesNed cmd2 =
        commanded_angles_ned(curve, coord2, pos2, cfg.model.delta0,
                             cfg.model.wind.xi);
    NdiCommandInput ndi_in;
    ndi_in.chi_cmd = cmd.chi_cmd;
    ndi_in.gamma_cmd = cmd.gamma_cmd;
    ndi_in.chi_dot_cmd = wrap_angle(cmd2.chi_cmd - cmd.chi_cmd) / fd_dt;
    ndi_in.gamma_dot_cmd = wrap_angle(cmd2.gamma_cmd - cmd.gamma_cmd) / fd_dt;

    const EstimatedRates est = ndi_estimated_rates(
        pos, y[3], y[4], y[5], forces.f_t_norm, cfg.model.wind.xi,
        cfg.model.aircraft);
    NdiResult ndi;
    try {
      ndi = ndi_command(y[3], y[4], y[5], ndi_in, est, cfg.ndi,
                        cfg.model.aircraft, cfg.limits);
    } catch (const std::exception& ex) {
      throw std::runtime_error("simulate: controller failure at t = " +
                               std::to_string(t) + ": " + ex.what());
    }

    // Hybrid switching on the tether-force history.
    SwitchFlags flags;
    Control u_cmd = ndi.u;
    history.push(t, forces.f_t_norm);
    if (sc.hybrid) {
      if (history.size() >= 2) flags = switch_eval(cfg.sw, history);
      mode = automaton_step(mode, flags.s1, flags.s2);
      if (mode == ControllerMode::kSafety) {
        try {
          u_cmd = safety_command(tables->control, x);
        } catch (const std::out_of_range&) {
          result.outcome = SimOutcome::kOutOfEnvelope;
          result.note = "left the table envelope at t = " + std::to_string(t);
          break;
        }
      }
    }

    if (!act_init) {
      act.alpha = u_cmd.alpha_a;
      act.mu = u_cmd.mu_a;
      act_init = true;
    }
    const Control u_applied = actuator_delay(
        u_cmd, act, sc.dt_ctrl, sc.tau_act, sc.alpha_rate_max, sc.mu_rate_max);

    // Winch command: force-tracking PI in traction, speed servo in the
    // placeholder retraction phase.
    const double l_tether = plant.tether_length(y[6]);
    double m_c;
    if (sc.retraction) {
      if (!retract_phase && l_tether > sc.l_max) retract_phase = true;
      if (retract_phase && l_tether < sc.l_min) retract_phase = false;
    }
    if (retract_phase) {
      const double omega_ref = -sc.reel_in_speed / cfg.winch.r_w;
      m_c = std::clamp(50.0 * (omega_ref - y[7]) -
                           cfg.winch.r_w * forces.f_w_norm,
                       -cfg.winch.m_c_max, cfg.winch.m_c_max);
    } else {
      m_c = winch_pi(forces.f_w_norm, cfg.winch.f_ref, pi, sc.dt_ctrl,
                     cfg.winch);
    }

    const double p_mech = power_mech(y[7], cfg.winch.r_w, forces.f_w_norm);

    TraceRow row;
    row.t = t;
    row.s = coord.s;
    row.sigma = coord.sigma;
    row.h_tau = y[2];
    row.v_a = y[3];
    row.chi_a = y[4];
    row.gamma_a = y[5];
    row.delta_t = delta_t;
    row.alpha_cmd = u_cmd.alpha_a;
    row.mu_cmd = u_cmd.mu_a;
    row.alpha_applied = u_applied.alpha_a;
    row.mu_applied = u_applied.mu_a;
    row.mode = mode == ControllerMode::kSafety ? 1 : 0;
    row.f_t_norm = forces.f_t_norm;
    row.f_w_norm = forces.f_w_norm;
    row.p_mech = p_mech;
    row.wind_x = wind_o.x();
    row.wind_y = wind_o.y();
    row.wind_z = wind_o.z();
    row.s1 = flags.s1 ? 1 : 0;
    row.s2 = flags.s2 ? 1 : 0;
    result.trace.push_back(row);

    result.max_f_t = std::max(result.max_f_t, forces.f_t_norm);
    if (mode == ControllerMode::kSafety) ++safety_steps;
    energy += p_mech * sc.dt_ctrl;

    if (forces.f_t_norm > cfg.model.f_rupture) {
      result.outcome = SimOutcome::kRuptured;
      result.note = "tether rupture at t = " + std::to_string(t);
      break;
    }
    if (step == steps) break;

    // Physics over one control step.
    try {
      for (int k = 0; k < n_sub; ++k)
        plant.rk4_step(y, dt_sub, u_applied, wind_o, m_c);
    } catch (const std::exception& ex) {
      throw std::runtime_error("simulate: plant failure at t = " +
                               std::to_string(t) + ": " + ex.what());
    }
    if (!y.allFinite())
      throw std::runtime_error("simulate: numerical divergence at t = " +
                               std::to_string(t));
    y[0] = wrap_angle(y[0]);
    y[4] = wrap_angle(y[4]);
  }

  const double elapsed =
      result.trace.empty() ? 0.0 : result.trace.back().t;
  result.cycles = unwrapped / (2.0 * M_PI);
  result.safety_fraction =
      result.trace.empty()
          ? 0.0
          : static_cast<double>(safety_steps) / result.trace.size();
  result.mean_power = elapsed > 0.0 ? energy / elapsed : 0.0;
  return result;
}

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("trace: cannot open " + path);
  out << "t,s,sigma,h_tau,v_a,chi_a,gamma_a,delta_t,alpha_cmd,mu_cmd,"
         "alpha_applied,mu_applied,mode,f_t_norm,f_w_norm,p_mech,"
         "wind_x,wind_y,wind_z,s1,s2\n";
  char buf[64];
  auto emit = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g%c", v, sep);
    out << buf;
  };
  for (const TraceRow& r : rows) {
    emit(r.t, ',');
    emit(r.s, ',');
    emit(r.sigma, ',');
    emit(r.h_tau, ',');
    emit(r.v_a, ',');
    emit(r.chi_a, ',');
    emit(r.gamma_a, ',');
    emit(r.delta_t, ',');
    emit(r.alpha_cmd, ',');
    emit(r.mu_cmd, ',');
    emit(r.alpha_applied, ',');
    emit(r.mu_applied, ',');
    out << r.mode << ',';
    emit(r.f_t_norm, ',');
    emit(r.f_w_norm, ',');
    emit(r.p_mech, ',');
    emit(r.wind_x, ',');
    emit(r.wind_y, ',');
    emit(r.wind_z, ',');
    out << r.s1 << ',' << r.s2 << '\n';
  }
  if (!out) throw std::runtime_error("trace: write failed for " + path);
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("trace: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("trace: empty file " + path);
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<double> vals;
    while (std::getline(ls, field, ',')) vals.push_back(std::stod(field));
    if (vals.size() != 21)
      throw std::runtime_error("trace: malformed row in " + path);
    TraceRow r;
    int i = 0;
    r.t = vals[i++];
    r.s = vals[i++];
    r.sigma = vals[i++];
    r.h_tau = vals[i++];
    r.v_a = vals[i++];
    r.chi_a = vals[i++];
    r.gamma_a = vals[i++];
    r.delta_t = vals[i++];
    r.alpha_cmd = vals[i++];
    r.mu_cmd = vals[i++];
    r.alpha_applied = vals[i++];
    r.mu_applied = vals[i++];
    r.mode = static_cast<int>(vals[i++]);
    r.f_t_norm = vals[i++];
    r.f_w_norm = vals[i++];
    r.p_mech = vals[i++];
    r.wind_x = vals[i++];
    r.wind_y = vals[i++];
    r.wind_z = vals[i++];
    r.s1 = static_cast<int>(vals[i++]);
    r.s2 = static_cast<int>(vals[i++]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace awe
