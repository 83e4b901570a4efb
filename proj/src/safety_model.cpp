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

#include "awe/safety_model.hpp"

#include <cmath>
#include <stdexcept>

namespace awe {

Vector7d SafetyState::vec() const {
  Vector7d v;
  v << s, sigma, h_tau, v_a, chi_a, gamma_a, delta_t;
  return v;
}

SafetyState SafetyState::from_vec(const Vector7d& v) {
  return SafetyState{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
}

ControlGrid ControlGrid::uniform(double alpha_min, double alpha_max,
                                 double mu_min, double mu_max, int n_alpha,
                                 int n_mu) {
  if (n_alpha < 1 || n_mu < 1)
    throw std::invalid_argument("control grid: empty axis");
  ControlGrid g;
  g.alphas.resize(n_alpha);
  g.mus.resize(n_mu);
  for (int i = 0; i < n_alpha; ++i)
    g.alphas[i] = n_alpha == 1 ? alpha_min
                               : alpha_min + (alpha_max - alpha_min) * i /
                                                 (n_alpha - 1);
  for (int j = 0; j < n_mu; ++j)
    g.mus[j] = n_mu == 1 ? mu_min : mu_min + (mu_max - mu_min) * j / (n_mu - 1);
  return g;
}

SafetyModel::SafetyModel(SafetyModelParams params)
    : params_(std::move(params)) {
  const auto& ac = params_.aircraft;
  const double scale = 0.5 * ac.rho * ac.s_ref;
  const auto& g = params_.ctrl;
  table_.a.reserve(g.alphas.size());
  for (double alpha : g.alphas) {
    const AeroCoeffs c = aero_coeffs(alpha, ac);
    table_.a.push_back(scale * c.cx);
    table_.b.push_back(scale * c.cz);
    table_.c.push_back(scale * c.cy);
    table_.cos_a.push_back(std::cos(alpha));
    table_.sin_a.push_back(std::sin(alpha));
  }
  for (double mu : g.mus) {
    table_.cos_mu.push_back(std::cos(mu));
    table_.sin_mu.push_back(std::sin(mu));
  }
}

SphericalPos SafetyModel::position_of(const SafetyState& x) const {
  return from_gamma(params_.curve, GammaCoord{x.s, x.sigma}, x.h_tau);
}

double SafetyModel::arc_length(double h_tau) const {
  return total_arc_length(params_.curve, h_tau);
}

Vector3d SafetyModel::base_velocity_tau(const SafetyState& x,
                                        const SphericalPos& pos) const {
  const Matrix3d m_tau = rotation_tau_w(pos.lambda, pos.phi);
  const Matrix3d m_ow = rotation_ow(params_.wind.xi);
  // Altitude above the ground station is the W-frame z coordinate.
  const double altitude = std::max(1e-3, cart_from_spherical(pos).z());
  const Vector3d shear_o = wind_shear(altitude, params_.wind);
  const Vector3d v_air_o =
      rotation_abar_o(x.chi_a, x.gamma_a).transpose() *
      Vector3d(x.v_a, 0.0, 0.0);
  return m_tau * (m_ow.transpose() * (v_air_o + shear_o));
}

double SafetyModel::straight_tension(const SafetyState& x,
                                     const SphericalPos& pos,
                                     const Vector3d& v_k0_tau) const {
  const Vector3d rates = polar_rates(v_k0_tau, pos);
  return straight_tether_tension(pos, x.delta_t, rates, params_.tether);
}

Vector3d SafetyModel::f_hat(const SafetyState& x, const Control& u) const {
  const auto& ac = params_.aircraft;
  if (x.v_a <= ac.v_stall_floor)
    throw std::domain_error("safety model: below stall floor");
  const double cg = std::cos(x.gamma_a);
  if (std::abs(cg) < 1e-6)
    throw std::domain_error("safety model: path angle singularity");
  const Vector3d f_abar = rotation_abar_a(u.mu_a) *
                          (rotation_ab(u.alpha_a, 0.0) *
                           aero_force_b(u.alpha_a, x.v_a, ac));
  return Vector3d(f_abar.x() / ac.m_a,
                  f_abar.y() / (ac.m_a * x.v_a * cg),
                  -f_abar.z() / (ac.m_a * x.v_a));
}

Vector7d SafetyModel::f_c(const SafetyState& x, const Disturbance& d) const {
  const auto& ac = params_.aircraft;
  const double cg = std::cos(x.gamma_a);
  if (std::abs(cg) < 1e-6)
    throw std::domain_error("safety model: path angle singularity");

  const SphericalPos pos = position_of(x);
  const Matrix3d m_tau = rotation_tau_w(pos.lambda, pos.phi);
  const CurvePoint cp = booth_point(params_.curve, x.s, x.h_tau);
  const Vector3d r_hat_foot = cp.point / x.h_tau;
  const Vector3d t_perp = r_hat_foot.cross(cp.tangent);
  const double l_gamma = arc_length(x.h_tau);

  const Vector3d v_k0 = base_velocity_tau(x, pos);
  const Vector3d v_k = v_k0 + m_tau * d.d_turb;

  const Vector3d t_tau = m_tau * cp.tangent;
  const Vector3d tp_tau = m_tau * t_perp;

  // Tether force uses the turbulence-free base velocity (the synthesis
  // model keeps the force independent of d).
  const double tension = straight_tension(x, pos, v_k0);
  const Vector3d r_hat_ac = cart_from_spherical(pos) / pos.h_tau;
  const Matrix3d m_abar_o = rotation_abar_o(x.chi_a, x.gamma_a);
  const Matrix3d m_ow = rotation_ow(params_.wind.xi);
  const Vector3d f_t_abar = m_abar_o * (m_ow * (-tension * r_hat_ac));
  const Vector3d f_g_abar =
      ac.m_a * ac.g * Vector3d(-std::sin(x.gamma_a), 0.0, cg);

  Vector7d f;
  f[0] = t_tau.dot(v_k) / (cp.tangent.norm() * l_gamma);
  f[1] = tp_tau.dot(v_k) / t_perp.norm();
  f[2] = -v_k.z();
  f[3] = (f_t_abar.x() + f_g_abar.x()) / ac.m_a;
  f[4] = (f_t_abar.y() + f_g_abar.y()) / (ac.m_a * x.v_a * cg);
  f[5] = -(f_t_abar.z() + f_g_abar.z()) / (ac.m_a * x.v_a);
  f[6] = d.d_delta_t;
  return f;
}

Vector7d SafetyModel::dynamics(const SafetyState& x, const Control& u,
                               const Disturbance& d) const {
  const auto& ac = params_.aircraft;
  if (x.v_a <= ac.v_stall_floor)
    throw std::domain_error("safety model: below stall floor");
  const double cg = std::cos(x.gamma_a);
  if (std::abs(cg) < 1e-6)
    throw std::domain_error("safety model: path angle singularity");

  const SphericalPos pos = position_of(x);
  const Matrix3d m_tau = rotation_tau_w(pos.lambda, pos.phi);
  const Matrix3d m_ow = rotation_ow(params_.wind.xi);
  const Vector3d v_k0 = base_velocity_tau(x, pos);
  const Vector3d v_k = v_k0 + m_tau * d.d_turb;
  const GammaRates gr = gamma_rates(params_.curve, GammaCoord{x.s, x.sigma},
                                    x.h_tau, v_k, arc_length(x.h_tau));

  const double tension = straight_tension(x, pos, v_k0);
  const Vector3d r_hat_ac = cart_from_spherical(pos) / pos.h_tau;
  const Vector3d f_t_o = m_ow * (-tension * r_hat_ac);

  const Matrix3d m_abar_o = rotation_abar_o(x.chi_a, x.gamma_a);
  const Vector3d f_sum_abar =
      m_abar_o * (gravity_force_o(ac.m_a, ac.g) + f_t_o) +
      rotation_abar_a(u.mu_a) *
          (rotation_ab(u.alpha_a, 0.0) * aero_force_b(u.alpha_a, x.v_a, ac));

  Vector7d f;
  f[0] = gr.s_dot;
  f[1] = gr.sigma_dot;
  f[2] = -v_k.z();
  f[3] = f_sum_abar.x() / ac.m_a;
  f[4] = f_sum_abar.y() / (ac.m_a * x.v_a * cg);
  f[5] = -f_sum_abar.z() / (ac.m_a * x.v_a);
  f[6] = d.d_delta_t;
  return f;
}

Control SafetyModel::optimal_control(const SafetyState& x,
                                     const Vector7d& q) const {
  const double cg = std::cos(x.gamma_a);
  if (std::abs(cg) < 1e-6)
    throw std::domain_error("safety model: path angle singularity");
  const auto& g = params_.ctrl;
  const size_t na = g.alphas.size(), nm = g.mus.size();
  double best = std::numeric_limits<double>::infinity();
  size_t best_k = 0, best_j = 0;
  for (size_t k = 0; k < na; ++k) {
    const double a_rot = table_.a[k] * table_.cos_a[k] +
                         table_.b[k] * table_.sin_a[k];
    const double b_rot = table_.b[k] * table_.cos_a[k] -
                         table_.a[k] * table_.sin_a[k];
    const double c_lat = table_.c[k];
    const double q4va = q[3] * x.v_a * a_rot;
    for (size_t j = 0; j < nm; ++j) {
      const double cm = table_.cos_mu[j], sm = table_.sin_mu[j];
      const double obj = q4va +
                         (q[4] / cg) * (c_lat * cm - b_rot * sm) -
                         q[5] * (c_lat * sm + b_rot * cm);
      if (obj < best) {
        best = obj;
        best_k = k;
        best_j = j;
      }
    }
  }
  return Control{g.alphas[best_k], g.mus[best_j]};
}

Control SafetyModel::optimal_control(const SafetyState& x, const Vector7d& q,
                                     const ControlGrid& grid) const {
  SafetyModelParams p = params_;
  p.ctrl = grid;
  return SafetyModel(p).optimal_control(x, q);
}

Disturbance SafetyModel::optimal_disturbance(const SafetyState& x,
                                             const Vector7d& q) const {
  const SphericalPos pos = position_of(x);
  const Matrix3d m_tau = rotation_tau_w(pos.lambda, pos.phi);
  const CurvePoint cp = booth_point(params_.curve, x.s, x.h_tau);
  const Vector3d r_hat_foot = cp.point / x.h_tau;
  const Vector3d t_perp = r_hat_foot.cross(cp.tangent);
  const double l_gamma = arc_length(x.h_tau);

  const Vector3d t_tau = m_tau * cp.tangent;
  const Vector3d tp_tau = m_tau * t_perp;
  const Vector3d r = q[0] * t_tau / (cp.tangent.norm() * l_gamma) +
                     q[1] * tp_tau / t_perp.norm() -
                     q[2] * Vector3d::UnitZ();
  const Vector3d coef = m_tau.transpose() * r;

  Disturbance d;
  d.d_delta_t =
      (q[6] >= 0.0 ? 1.0 : -1.0) * params_.dist.d_delta_t_max;
  for (int i = 0; i < 3; ++i)
    d.d_turb[i] = (coef[i] >= 0.0 ? 1.0 : -1.0) * params_.dist.d_turb_max;
  return d;
}

double SafetyModel::hamiltonian(const SafetyState& x, const Vector7d& q) const {
  const Control u = optimal_control(x, q);
  const Disturbance d = optimal_disturbance(x, q);
  const Vector3d fh = f_hat(x, u);
  const double q_fhat = q[3] * fh[0] + q[4] * fh[1] + q[5] * fh[2];
  return q_fhat + q.dot(f_c(x, d));
}

double SafetyModel::h_fn(const SafetyState& x) const {
  const SphericalPos pos = position_of(x);
  const Vector3d v_k0 = base_velocity_tau(x, pos);
  const double tension = straight_tension(x, pos, v_k0);
  return (tension - params_.f_rupture) /
         (params_.h_weight * params_.f_rupture);
}

double SafetyModel::l_fn(const SafetyState& x) const {
  const SphericalPos pos = position_of(x);
  const CommandedAnglesNed cmd =
      commanded_angles_ned(params_.curve, GammaCoord{x.s, x.sigma}, pos,
                           params_.delta0, params_.wind.xi);
  const double e_chi = std::abs(wrap_angle(cmd.chi_cmd - x.chi_a));
  const double e_gamma = std::abs(wrap_angle(cmd.gamma_cmd - x.gamma_a));
  return (std::max(e_chi, e_gamma) - params_.eps_align) / M_PI;
}

Vector7d SafetyModel::speed_bounds(const SafetyState& x) const {
  const auto& ac = params_.aircraft;
  const double cg = std::cos(x.gamma_a);
  const SphericalPos pos = position_of(x);
  const Matrix3d m_tau = rotation_tau_w(pos.lambda, pos.phi);
  const CurvePoint cp = booth_point(params_.curve, x.s, x.h_tau);
  const Vector3d r_hat_foot = cp.point / x.h_tau;
  const Vector3d t_perp = r_hat_foot.cross(cp.tangent);
  const double l_gamma = arc_length(x.h_tau);
  const Vector3d v_k0 = base_velocity_tau(x, pos);

  const Vector3d tn = m_tau * cp.tangent / (cp.tangent.norm() * l_gamma);
  const Vector3d tp = m_tau * t_perp / t_perp.norm();
  const double dmax = params_.dist.d_turb_max;

  auto row_bound = [&](const Vector3d& w) {
    const Vector3d coef = m_tau.transpose() * w;
    return std::abs(w.dot(v_k0)) + dmax * coef.lpNorm<1>();
  };

  const double tension = straight_tension(x, pos, v_k0);
  const Vector3d r_hat_ac = cart_from_spherical(pos) / pos.h_tau;
  const Matrix3d m_abar_o = rotation_abar_o(x.chi_a, x.gamma_a);
  const Vector3d f_t_abar =
      m_abar_o * (rotation_ow(params_.wind.xi) * (-tension * r_hat_ac));
  const Vector3d f_g_abar =
      ac.m_a * ac.g * Vector3d(-std::sin(x.gamma_a), 0.0, cg);

  double amax = 0.0, latmax = 0.0;
  for (size_t k = 0; k < table_.a.size(); ++k) {
    const double a_rot =
        table_.a[k] * table_.cos_a[k] + table_.b[k] * table_.sin_a[k];
    const double b_rot =
        table_.b[k] * table_.cos_a[k] - table_.a[k] * table_.sin_a[k];
    amax = std::max(amax, std::abs(a_rot));
    latmax = std::max(latmax, std::hypot(table_.c[k], b_rot));
  }
  const double v2m = x.v_a * x.v_a / ac.m_a;

  Vector7d b;
  b[0] = row_bound(tn);
  b[1] = row_bound(tp);
  b[2] = row_bound(Vector3d::UnitZ());
  b[3] = v2m * amax + std::abs((f_t_abar.x() + f_g_abar.x()) / ac.m_a);
  b[4] = v2m * latmax / (x.v_a * std::abs(cg)) +
         std::abs((f_t_abar.y() + f_g_abar.y()) / (ac.m_a * x.v_a * cg));
  b[5] = v2m * latmax / x.v_a +
         std::abs((f_t_abar.z() + f_g_abar.z()) / (ac.m_a * x.v_a));
  b[6] = params_.dist.d_delta_t_max;
  return b;
}

}  // namespace awe
