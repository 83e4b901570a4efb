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

#include "awe/tether.hpp"

#include <cmath>
#include <stdexcept>

namespace awe {

namespace {
constexpr double kMinSegmentLength = 1e-9;
}

double segment_tension_scalar(const Vector3d& s, const Vector3d& s_v,
                              double rest_length, const TetherParams& p) {
  const double len = s.norm();
  if (len < kMinSegmentLength)
    throw std::domain_error("tether: zero-length segment");
  const Vector3d s_hat = s / len;
  return p.k * (len - rest_length) + p.c * s_hat.dot(s_v);
}

Vector3d segment_tension(const Vector3d& s, const Vector3d& s_v,
                         double rest_length, const TetherParams& p) {
  const double len = s.norm();
  if (len < kMinSegmentLength)
    throw std::domain_error("tether: zero-length segment");
  const Vector3d s_hat = s / len;
  return (p.k * (len - rest_length) + p.c * s_hat.dot(s_v)) * s_hat;
}

Vector3d segment_drag(const Vector3d& s, const Vector3d& v_air,
                      const TetherParams& p) {
  const double len = s.norm();
  if (len < kMinSegmentLength)
    throw std::domain_error("tether: zero-length segment");
  const double v_norm = v_air.norm();
  if (v_norm < 1e-12) return Vector3d::Zero();
  const Vector3d s_hat = s / len;
  const Vector3d v_perp = v_air - s_hat.dot(v_air) * s_hat;
  const Vector3d v_hat = v_air / v_norm;
  const double area = p.d_t * (s - s.dot(v_hat) * v_hat).norm();
  return 0.5 * p.rho * p.c_dt * v_perp * v_perp.norm() * area;
}

TetherDerivatives tether_derivatives(const TetherState& st,
                                     const Vector3d& aircraft_p,
                                     const Vector3d& aircraft_v,
                                     double rest_length,
                                     const WindAtHeight& wind,
                                     const TetherParams& p) {
  const int n = static_cast<int>(st.p.size());
  if (n != p.n || static_cast<int>(st.v.size()) != n)
    throw std::invalid_argument("tether: state size mismatch");
  if (rest_length <= 0.0)
    throw std::domain_error("tether: rest length must be > 0");

  // Node 0 is the ground anchor; node n+1 is the aircraft.
  auto node_p = [&](int i) -> Vector3d {
    if (i == 0) return Vector3d::Zero();
    if (i == n + 1) return aircraft_p;
    return st.p[i - 1];
  };
  auto node_v = [&](int i) -> Vector3d {
    if (i == 0) return Vector3d::Zero();
    if (i == n + 1) return aircraft_v;
    return st.v[i - 1];
  };

  // Tension-only spring forces per segment (slack segments transmit none).
  std::vector<Vector3d> f_s(n + 2);
  std::vector<double> tension(n + 2, 0.0);
  for (int i = 1; i <= n + 1; ++i) {
    const Vector3d s = node_p(i) - node_p(i - 1);
    const Vector3d s_v = node_v(i) - node_v(i - 1);
    const double len = s.norm();
    if (len < kMinSegmentLength)
      throw std::domain_error("tether: zero-length segment");
    const double t = segment_tension_scalar(s, s_v, rest_length, p);
    tension[i] = std::max(0.0, t);
    f_s[i] = tension[i] / len * s;
  }

  TetherDerivatives out;
  out.p_dot.resize(n);
  out.v_dot.resize(n);
  const Vector3d gravity(0.0, 0.0, -p.m_t * p.g);  // W frame, z up
  for (int i = 1; i <= n; ++i) {
    // Apparent air velocity at the segment above particle i, from shear at
    // the particle altitude and the mean segment velocity.
    const Vector3d v_w = wind ? wind(node_p(i).z()) : Vector3d::Zero();
    const Vector3d v_air = v_w - 0.5 * (node_v(i + 1) + node_v(i));
    const Vector3d s_up = node_p(i + 1) - node_p(i);
    const Vector3d drag = segment_drag(s_up, v_air, p);

    const Vector3d f = f_s[i + 1] - f_s[i] + gravity + drag;
    out.p_dot[i - 1] = node_v(i);
    out.v_dot[i - 1] = f / p.m_t;
  }
  out.aircraft_force = -f_s[n + 1];
  out.f_t_norm = tension[n + 1];
  out.f_w_norm = tension[1];
  return out;
}

namespace {

// Straight-model particle position/velocity factors. Positions lie on the
// ray to the aircraft; velocities follow the rotating, stretching ray.
struct StraightRay {
  Vector3d r_hat;      // outward unit direction
  Vector3d r_hat_dot;  // its time derivative
};

StraightRay straight_ray(const SphericalPos& pos, const Vector3d& rates) {
  const double cl = std::cos(pos.lambda), sl = std::sin(pos.lambda);
  const double cp = std::cos(pos.phi), sp = std::sin(pos.phi);
  const double lambda_dot = rates[0], phi_dot = rates[1];
  StraightRay ray;
  ray.r_hat = Vector3d(cp * cl, cp * sl, sp);
  ray.r_hat_dot = Vector3d(-sp * phi_dot * cl - cp * sl * lambda_dot,
                           -sp * phi_dot * sl + cp * cl * lambda_dot,
                           cp * phi_dot);
  return ray;
}

}  // namespace

double straight_tether_tension(const SphericalPos& pos, double delta_t,
                               const Vector3d& rates, const TetherParams& p) {
  const double l_s_stretched = pos.h_tau / (p.n + 1);
  if (delta_t <= -l_s_stretched)
    throw std::domain_error("straight_tether: segment collapsed");
  if (pos.h_tau <= 0.0) throw std::domain_error("straight_tether: h_tau <= 0");
  // s_{n+1} is radial, so the damping term reduces to the radial relative
  // speed h_tau_dot/(n+1).
  const double h_dot = rates[2];
  const double hooke = p.k * delta_t + p.c * h_dot / (p.n + 1);
  return std::max(0.0, hooke);
}

Vector3d straight_tether_force(const SphericalPos& pos, double delta_t,
                               const Vector3d& rates, const TetherParams& p) {
  const double tension = straight_tether_tension(pos, delta_t, rates, p);
  const StraightRay ray = straight_ray(pos, rates);
  // Tension pulls the aircraft toward the origin.
  return -tension * ray.r_hat;
}

double delta_t_rate(const Vector3d& s_last, const Vector3d& s_v_last,
                    double theta_dot_w, double r_w, int n) {
  const double len = s_last.norm();
  if (len < kMinSegmentLength)
    throw std::domain_error("delta_t_rate: zero-length segment");
  return s_v_last.dot(s_last) / len - r_w * theta_dot_w / (n + 1);
}

}  // namespace awe
