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

#include "awe/frames.hpp"

#include <cmath>
#include <stdexcept>

namespace awe {

namespace {
constexpr double kPoleMargin = 1e-9;

void require_finite(std::span<const double> angles) {
  for (double a : angles) {
    if (!std::isfinite(a)) throw std::domain_error("frames: non-finite angle");
  }
}
}  // namespace

Matrix3d rotation_ab(double alpha, double beta) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  Matrix3d m;
  m << ca * cb, sb, sa * cb,
      -ca * sb, cb, -sa * sb,
      -sa, 0.0, ca;
  return m;
}

Matrix3d rotation_tau_w(double lambda, double phi) {
  const double cl = std::cos(lambda), sl = std::sin(lambda);
  const double cp = std::cos(phi), sp = std::sin(phi);
  Matrix3d m;
  m << -sp * cl, -sp * sl, cp,
      -sl, cl, 0.0,
      -cp * cl, -cp * sl, -sp;
  return m;
}

Matrix3d rotation_ow(double xi) {
  const double c = std::cos(xi), s = std::sin(xi);
  Matrix3d m;
  m << c, s, 0.0,
      s, -c, 0.0,
      0.0, 0.0, -1.0;
  return m;
}

Matrix3d rotation_abar_a(double mu) {
  const double c = std::cos(mu), s = std::sin(mu);
  Matrix3d m;
  m << 1.0, 0.0, 0.0,
      0.0, c, -s,
      0.0, s, c;
  return m;
}

Matrix3d rotation_abar_o(double chi, double gamma) {
  const double cc = std::cos(chi), sc = std::sin(chi);
  const double cg = std::cos(gamma), sg = std::sin(gamma);
  Matrix3d m;
  m << cc * cg, sc * cg, -sg,
      -sc, cc, 0.0,
      cc * sg, sc * sg, cg;
  return m;
}

Matrix3d rotation_wp(double psi0) {
  const double c = std::cos(psi0), s = std::sin(psi0);
  Matrix3d m;
  m << c, 0.0, -s,
      0.0, 1.0, 0.0,
      s, 0.0, c;
  return m;
}

Matrix3d build_rotation(FramePair kind, std::span<const double> angles,
                        bool inverse) {
  require_finite(angles);
  auto need = [&](size_t n) {
    if (angles.size() != n)
      throw std::domain_error("frames: wrong number of angles");
  };
  Matrix3d m;
  switch (kind) {
    case FramePair::kAB:
      need(2);
      m = rotation_ab(angles[0], angles[1]);
      break;
    case FramePair::kTauW:
      need(2);
      m = rotation_tau_w(angles[0], angles[1]);
      break;
    case FramePair::kOW:
      need(1);
      m = rotation_ow(angles[0]);
      break;
    case FramePair::kAbarA:
      need(1);
      m = rotation_abar_a(angles[0]);
      break;
    case FramePair::kAbarO:
      need(2);
      m = rotation_abar_o(angles[0], angles[1]);
      break;
    case FramePair::kWP:
      need(1);
      m = rotation_wp(angles[0]);
      break;
    default:
      throw std::domain_error("frames: unknown frame pair");
  }
  return inverse ? Matrix3d(m.transpose()) : m;
}

double wrap_angle(double a) {
  const double two_pi = 2.0 * M_PI;
  double w = std::fmod(a + M_PI, two_pi);
  if (w < 0.0) w += two_pi;
  return w - M_PI;
}

Vector3d cart_from_spherical(const SphericalPos& p) {
  const double cl = std::cos(p.lambda), sl = std::sin(p.lambda);
  const double cp = std::cos(p.phi), sp = std::sin(p.phi);
  return p.h_tau * Vector3d(cl * cp, sl * cp, sp);
}

SphericalPos spherical_from_cart(const Vector3d& p) {
  const double r = p.norm();
  if (r <= 0.0) throw std::domain_error("frames: zero radius");
  SphericalPos out;
  out.h_tau = r;
  out.phi = std::asin(std::clamp(p.z() / r, -1.0, 1.0));
  if (std::abs(out.phi) >= M_PI / 2.0 - kPoleMargin)
    throw std::domain_error("frames: longitude degenerate at pole");
  out.lambda = wrap_angle(std::atan2(p.y(), p.x()));
  return out;
}

GeodesicResult geodesic(const SphericalPos& from, const SphericalPos& to,
                        double radius) {
  if (radius <= 0.0) throw std::domain_error("frames: radius must be > 0");
  SphericalPos a = from, b = to;
  a.h_tau = 1.0;
  b.h_tau = 1.0;
  const Vector3d u = cart_from_spherical(a);
  const Vector3d v = cart_from_spherical(b);
  const double c = u.dot(v);
  const double s = u.cross(v).norm();
  const double angle = std::atan2(s, c);

  GeodesicResult out;
  out.distance = radius * angle;
  out.direction = Vector2d::Zero();
  if (s < 1e-15) {
    if (c < 0.0)
      throw std::domain_error("frames: antipodal points, direction ambiguous");
    return out;  // coincident
  }
  // Departure tangent at `from`, then its north/east components in tau.
  const Vector3d t = (v - c * u).normalized();
  const Matrix3d m = rotation_tau_w(from.lambda, from.phi);
  const Vector3d t_tau = m * t;
  out.direction = Vector2d(t_tau.x(), t_tau.y());
  const double n = out.direction.norm();
  if (n > 0.0) out.direction /= n;
  return out;
}

}  // namespace awe
