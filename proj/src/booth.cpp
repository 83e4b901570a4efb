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

#include "awe/booth.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace awe {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_param(double s) {
  double w = std::fmod(s, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

// Booth longitude/latitude in the P frame and their s-derivatives.
struct BoothAngles {
  double lambda, phi, dlambda, dphi;
};

BoothAngles booth_angles(const BoothCurve& c, double s, double h_tau) {
  const double ratio2 = (c.a_booth / c.b_booth) * (c.a_booth / c.b_booth);
  const double ss = std::sin(s), cs = std::cos(s);
  const double den = 1.0 + ratio2 * cs * cs;
  const double dden = -2.0 * ratio2 * ss * cs;
  BoothAngles out;
  out.lambda = (c.b_booth / h_tau) * ss / den;
  out.phi = (c.a_booth / h_tau) * ss * cs / den;
  out.dlambda = (c.b_booth / h_tau) * (cs * den - ss * dden) / (den * den);
  const double num = ss * cs;
  const double dnum = cs * cs - ss * ss;
  out.dphi = (c.a_booth / h_tau) * (dnum * den - num * dden) / (den * den);
  return out;
}

// Adaptive Simpson to relative tolerance; f must be smooth.
double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(F&& f, double a, double m, double b, double fa,
                        double fm, double fb, double whole, double tol,
                        int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, tol / 2.0,
                          depth - 1) +
         adaptive_simpson(f, m, rm, b, fm, frm, fb, right, tol / 2.0,
                          depth - 1);
}

}  // namespace

CurvePoint booth_point(const BoothCurve& curve, double s, double h_tau) {
  if (!std::isfinite(s)) throw std::domain_error("booth: non-finite s");
  const BoothAngles a = booth_angles(curve, s, h_tau);
  const double cl = std::cos(a.lambda), sl = std::sin(a.lambda);
  const double cp = std::cos(a.phi), sp = std::sin(a.phi);

  const Vector3d p_p = h_tau * Vector3d(cl * cp, sl * cp, sp);
  // Chain rule: dGamma/ds = dGamma/dlambda * dlambda/ds
  //                       + dGamma/dphi * dphi/ds.
  const Vector3d d_lambda = h_tau * Vector3d(-sl * cp, cl * cp, 0.0);
  const Vector3d d_phi = h_tau * Vector3d(-cl * sp, -sl * sp, cp);
  const Vector3d t_p = d_lambda * a.dlambda + d_phi * a.dphi;

  const Matrix3d m_wp = rotation_wp(curve.psi0);
  CurvePoint out;
  out.lambda_g = a.lambda;
  out.phi_g = a.phi;
  out.point = m_wp * p_p;
  out.tangent = m_wp * t_p;
  return out;
}

double total_arc_length(const BoothCurve& curve, double h_tau) {
  auto speed = [&](double s) {
    const BoothAngles a = booth_angles(curve, s, h_tau);
    // |dGamma/ds|^2 = h^2 (cos^2(phi) dlambda^2 + dphi^2) on the sphere.
    const double cp = std::cos(a.phi);
    return h_tau * std::sqrt(cp * cp * a.dlambda * a.dlambda +
                             a.dphi * a.dphi);
  };
  // Split at the lobe turning points to help the recursion.
  double total = 0.0;
  const int segments = 8;
  for (int i = 0; i < segments; ++i) {
    const double a = kTwoPi * i / segments;
    const double b = kTwoPi * (i + 1) / segments;
    const double m = 0.5 * (a + b);
    const double fa = speed(a), fm = speed(m), fb = speed(b);
    const double whole = simpson(a, b, fa, fm, fb);
    total += adaptive_simpson(speed, a, m, b, fa, fm, fb, whole,
                              1e-8 * std::abs(whole) + 1e-12, 40);
  }
  return total;
}

namespace {

// Squared-chord distance on the unit sphere between the position direction
// and the curve point at s; monotone in geodesic distance.
double chord2(const BoothCurve& curve, const Vector3d& u_pos, double s,
              double h_tau) {
  const CurvePoint cp = booth_point(curve, s, h_tau);
  const Vector3d u_c = cp.point / h_tau;
  return (u_pos - u_c).squaredNorm();
}

double golden_refine(const BoothCurve& curve, const Vector3d& u_pos,
                     double h_tau, double lo, double hi, double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = chord2(curve, u_pos, c, h_tau);
  double fd = chord2(curve, u_pos, d, h_tau);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = chord2(curve, u_pos, c, h_tau);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = chord2(curve, u_pos, d, h_tau);
    }
  }
  return 0.5 * (a + b);
}

// Secant polish on the stationarity residual u_pos . t(s), which vanishes
// where the geodesic to the point meets the curve orthogonally. Sharpens
// the golden-section result to machine precision; returns the iterate with
// the smallest residual inside the bracket window.
double polish_foot(const BoothCurve& curve, const Vector3d& u_pos,
                   double h_tau, double s_init, double window) {
  auto ortho = [&](double s) {
    return u_pos.dot(booth_point(curve, s, h_tau).tangent);
  };
  double best_s = s_init;
  double best_f = std::abs(ortho(s_init));
  double s0 = s_init - 1e-7, s1 = s_init + 1e-7;
  double f0 = ortho(s0), f1 = ortho(s1);
  for (int it = 0; it < 30; ++it) {
    if (f1 == f0) break;
    const double s2 = s1 - f1 * (s1 - s0) / (f1 - f0);
    if (!std::isfinite(s2) || std::abs(s2 - s_init) > window) break;
    s0 = s1;
    f0 = f1;
    s1 = s2;
    f1 = ortho(s1);
    if (std::abs(f1) < best_f) {
      best_f = std::abs(f1);
      best_s = s1;
    }
    if (std::abs(s1 - s0) < 1e-15) break;
  }
  return best_s;
}

}  // namespace

GammaCoord to_gamma(const BoothCurve& curve, const SphericalPos& pos,
                    const Vector3d& v_k_tau, double sigma_max,
                    double tie_tol_m, std::optional<double> s_hint) {
  SphericalPos unit_pos = pos;
  unit_pos.h_tau = 1.0;
  const Vector3d u_pos = cart_from_spherical(unit_pos);

  // Coarse scan. The Booth curve brings distinct branches close together, so
  // collect all local minima instead of descending from a single seed.
  constexpr int kScan = 720;
  std::vector<double> d2(kScan);
  for (int i = 0; i < kScan; ++i)
    d2[i] = chord2(curve, u_pos, kTwoPi * i / kScan, pos.h_tau);

  struct Candidate {
    double s;
    double dist;
  };
  std::vector<Candidate> cands;
  for (int i = 0; i < kScan; ++i) {
    const double prev = d2[(i + kScan - 1) % kScan];
    const double next = d2[(i + 1) % kScan];
    if (d2[i] <= prev && d2[i] <= next) {
      const double lo = kTwoPi * (i - 1) / kScan;
      const double hi = kTwoPi * (i + 1) / kScan;
      double s_ref = golden_refine(curve, u_pos, pos.h_tau, lo, hi, 1e-10);
      s_ref = polish_foot(curve, u_pos, pos.h_tau, s_ref, hi - lo);
      const double c2 = chord2(curve, u_pos, s_ref, pos.h_tau);
      const double dist =
          pos.h_tau * 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(c2)));
      cands.push_back({wrap_param(s_ref), dist});
    }
  }
  if (cands.empty()) throw std::runtime_error("to_gamma: no candidate minima");

  double best = cands.front().dist;
  for (const auto& c : cands) best = std::min(best, c.dist);
  if (best > sigma_max)
    throw std::domain_error("to_gamma: point outside the sigma band");

  // Branch continuity: a hinted candidate wins while it stays in the band.
  const Matrix3d m_tau = rotation_tau_w(pos.lambda, pos.phi);
  if (s_hint) {
    const Candidate* near_hint = nullptr;
    double best_gap = 0.8;  // [rad] how far the parameter may move per call
    for (const auto& c : cands) {
      const double gap = std::abs(wrap_angle(c.s - wrap_param(*s_hint)));
      if (gap < best_gap && c.dist <= sigma_max) {
        best_gap = gap;
        near_hint = &c;
      }
    }
    if (near_hint != nullptr) {
      const CurvePoint foot = booth_point(curve, near_hint->s, pos.h_tau);
      const Vector3d r_hat = foot.point / pos.h_tau;
      const Vector3d offset = u_pos - u_pos.dot(r_hat) * r_hat;
      GammaCoord out;
      out.s = near_hint->s;
      if (offset.norm() < 1e-15) {
        out.sigma = 0.0;
        return out;
      }
      const Vector3d g = offset.normalized();
      const double sign =
          r_hat.cross(foot.tangent).dot(g) >= 0.0 ? 1.0 : -1.0;
      out.sigma = sign * near_hint->dist;
      return out;
    }
  }

  // Velocity disambiguation among near-ties.
  const Candidate* chosen = nullptr;
  double best_cos = -2.0;
  int near_ties = 0;
  for (const auto& c : cands) {
    if (c.dist > best + tie_tol_m) continue;
    ++near_ties;
    const CurvePoint cp = booth_point(curve, c.s, pos.h_tau);
    const Vector3d t_tau = m_tau * cp.tangent;
    const double denom = t_tau.norm() * v_k_tau.norm();
    const double cosang = denom > 1e-12 ? t_tau.dot(v_k_tau) / denom : 0.0;
    if (cosang > best_cos) {
      best_cos = cosang;
      chosen = &c;
    }
  }
  if (near_ties > 1 && v_k_tau.norm() < 1e-9) {
    // Distinct branches at the same distance and no velocity to pick one.
    double smin = cands.front().s, smax = smin;
    for (const auto& c : cands) {
      if (c.dist > best + tie_tol_m) continue;
      smin = std::min(smin, c.s);
      smax = std::max(smax, c.s);
    }
    if (smax - smin > 1e-6)
      throw std::runtime_error("to_gamma: ambiguous branch at zero velocity");
  }

  const CurvePoint foot = booth_point(curve, chosen->s, pos.h_tau);
  const Vector3d r_hat = foot.point / pos.h_tau;
  const Vector3d offset = u_pos - u_pos.dot(r_hat) * r_hat;
  GammaCoord out;
  out.s = chosen->s;
  if (offset.norm() < 1e-15) {
    out.sigma = 0.0;
    return out;
  }
  const Vector3d g = offset.normalized();
  const double sign = r_hat.cross(foot.tangent).dot(g) >= 0.0 ? 1.0 : -1.0;
  out.sigma = sign * chosen->dist;
  return out;
}

SphericalPos from_gamma(const BoothCurve& curve, const GammaCoord& coord,
                        double h_tau) {
  const CurvePoint foot = booth_point(curve, coord.s, h_tau);
  const Vector3d r_hat = foot.point / h_tau;
  Vector3d t_perp = r_hat.cross(foot.tangent);
  const double n = t_perp.norm();
  if (n < 1e-12) throw std::domain_error("from_gamma: degenerate tangent");
  t_perp /= n;
  const double ang = coord.sigma / h_tau;
  const Vector3d p = h_tau * (std::cos(ang) * r_hat + std::sin(ang) * t_perp);
  return spherical_from_cart(p);
}

GammaRates gamma_rates(const BoothCurve& curve, const GammaCoord& coord,
                       double h_tau, const Vector3d& v_k_tau,
                       double arc_length) {
  const CurvePoint cp = booth_point(curve, coord.s, h_tau);
  const double t_norm = cp.tangent.norm();
  if (t_norm < 1e-12) throw std::domain_error("gamma_rates: degenerate tangent");
  const Vector3d r_hat = cp.point / h_tau;
  const Vector3d t_perp = r_hat.cross(cp.tangent);

  const SphericalPos pos = from_gamma(curve, coord, h_tau);
  const Matrix3d m_tau = rotation_tau_w(pos.lambda, pos.phi);
  const Vector3d t_tau = m_tau * cp.tangent;
  const Vector3d tp_tau = m_tau * t_perp;

  GammaRates out;
  out.s_dot = t_tau.dot(v_k_tau) / (t_norm * arc_length);
  out.sigma_dot = tp_tau.dot(v_k_tau) / t_perp.norm();
  return out;
}

CommandedAngles commanded_angles(const BoothCurve& curve,
                                 const GammaCoord& coord, double h_tau,
                                 double delta0) {
  if (delta0 <= 0.0) throw std::domain_error("commanded_angles: delta0 <= 0");
  const CurvePoint cp = booth_point(curve, coord.s, h_tau);
  const SphericalPos pos = from_gamma(curve, coord, h_tau);
  const Matrix3d m_tau = rotation_tau_w(pos.lambda, pos.phi);
  const Vector3d t_tau = m_tau * cp.tangent;

  CommandedAngles out;
  const double chi_par = std::atan2(t_tau.y(), t_tau.x());
  const double delta_chi = std::atan(coord.sigma / delta0);
  out.chi_cmd_tau = wrap_angle(chi_par + delta_chi);
  out.gamma_cmd_tau = 0.0;
  return out;
}

CommandedAnglesNed commanded_angles_ned(const BoothCurve& curve,
                                        const GammaCoord& coord,
                                        const SphericalPos& pos, double delta0,
                                        double xi) {
  const CommandedAngles tau_cmd =
      commanded_angles(curve, coord, pos.h_tau, delta0);
  const double cc = std::cos(tau_cmd.chi_cmd_tau);
  const double sc = std::sin(tau_cmd.chi_cmd_tau);
  const double cg = std::cos(tau_cmd.gamma_cmd_tau);
  const double sg = std::sin(tau_cmd.gamma_cmd_tau);
  // Direction in the local tau frame (x north, z down toward the origin).
  const Vector3d u_tau(cc * cg, sc * cg, -sg);
  const Matrix3d m_tau = rotation_tau_w(pos.lambda, pos.phi);
  const Matrix3d m_ow = rotation_ow(xi);
  const Vector3d u_o = m_ow * (m_tau.transpose() * u_tau);
  CommandedAnglesNed out;
  out.chi_cmd = std::atan2(u_o.y(), u_o.x());
  out.gamma_cmd = std::atan2(-u_o.z(), std::hypot(u_o.x(), u_o.y()));
  return out;
}

}  // namespace awe
