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

#include "awe/control/ndi.hpp"

#include <cmath>
#include <stdexcept>

namespace awe {

namespace {

// Rotated lift channel B(alpha) = scale * (cz cos(alpha) - cx sin(alpha)).
// Negative for lifting angles of attack.
double lift_channel(double alpha, const AircraftParams& ac) {
  const AeroCoeffs c = aero_coeffs(alpha, ac);
  const double scale = 0.5 * ac.rho * ac.s_ref;
  return scale * (c.cz * std::cos(alpha) - c.cx * std::sin(alpha));
}

}  // namespace

EstimatedRates ndi_estimated_rates(const SphericalPos& pos, double v_a,
                                   double chi_a, double gamma_a,
                                   double f_t_norm, double xi,
                                   const AircraftParams& ac) {
  const double cg = std::cos(gamma_a);
  if (std::abs(cg) < 1e-6)
    throw std::domain_error("ndi: path angle singularity");
  const Vector3d r_hat_w = cart_from_spherical(pos) / pos.h_tau;
  // Measured force magnitude, redirected along the straight line to the
  // origin (the tether pulls the aircraft inward).
  const Vector3d f_t_o = rotation_ow(xi) * (-f_t_norm * r_hat_w);
  const Vector3d f_abar = rotation_abar_o(chi_a, gamma_a) *
                          (f_t_o + gravity_force_o(ac.m_a, ac.g));
  EstimatedRates est;
  est.chi_dot_est = f_abar.y() / (ac.m_a * v_a * cg);
  est.gamma_dot_est = -f_abar.z() / (ac.m_a * v_a);
  return est;
}

NdiResult ndi_command(double v_a, double chi_a, double gamma_a,
                      const NdiCommandInput& cmd, const EstimatedRates& est,
                      const NdiGains& gains, const AircraftParams& ac,
                      const ControlLimits& lim) {
  const double cg = std::cos(gamma_a);
  if (std::abs(cg) < 1e-6)
    throw std::domain_error("ndi: path angle singularity");
  if (v_a <= ac.v_stall_floor) throw std::domain_error("ndi: below stall floor");

  const double nu_chi = cmd.chi_dot_cmd +
                        gains.k_p_chi * wrap_angle(cmd.chi_cmd - chi_a) -
                        est.chi_dot_est;
  const double nu_gamma = cmd.gamma_dot_cmd +
                          gains.k_p_gamma * wrap_angle(cmd.gamma_cmd - gamma_a) -
                          est.gamma_dot_est;

  NdiResult out;
  // Channel model (cy = 0): nu_chi = -v B sin(mu)/(m cos(gamma)),
  // nu_gamma = -v B cos(mu)/m with B < 0, so both channels share the
  // positive factor -vB/m and mu follows from their ratio.
  double mu = std::atan2(nu_chi * cg, nu_gamma);
  if (mu < lim.mu_min) {
    mu = lim.mu_min;
    out.saturated = true;
  } else if (mu > lim.mu_max) {
    mu = lim.mu_max;
    out.saturated = true;
  }

  const double cm = std::cos(mu);
  auto gamma_residual = [&](double alpha) {
    return -v_a * lift_channel(alpha, ac) * cm / ac.m_a - nu_gamma;
  };
  double lo = lim.alpha_min, hi = lim.alpha_max;
  double flo = gamma_residual(lo), fhi = gamma_residual(hi);
  double alpha;
  if (flo == 0.0) {
    alpha = lo;
  } else if (fhi == 0.0) {
    alpha = hi;
  } else if (flo * fhi < 0.0) {
    for (int it = 0; it < 60 && hi - lo > 1e-6; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = gamma_residual(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if (flo * fm < 0.0) {
        hi = mid;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    alpha = 0.5 * (lo + hi);
  } else {
    alpha = std::abs(flo) < std::abs(fhi) ? lo : hi;
    out.saturated = true;
  }

  out.u.alpha_a = std::clamp(alpha, lim.alpha_min, lim.alpha_max);
  out.u.mu_a = mu;
  return out;
}

}  // namespace awe
