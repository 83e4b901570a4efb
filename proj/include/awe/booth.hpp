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

#ifndef AWE_BOOTH_HPP_
#define AWE_BOOTH_HPP_

#include <optional>

#include <Eigen/Dense>

#include "awe/frames.hpp"

namespace awe {

// Figure-eight reference curve (Lemniscate of Booth) on the sphere of radius
// h_tau, rotated about the W y-axis by psi0. The curve parameter s runs over
// [0, 2*pi); the metric size of the curve (a_booth tall, b_booth wide, in
// meters) is independent of h_tau.
struct BoothCurve {
  double a_booth = 72.0;   // [m] height parameter (a/b keeps the 120/200 ratio)
  double b_booth = 120.0;  // [m] width parameter
  double psi0 = 0.6108652381980153;  // [rad] curve elevation rotation (35 deg)
  double h_tau_ref = 250.0;  // [m] nominal operating radius
};

struct CurvePoint {
  double lambda_g = 0.0;   // curve longitude in the P frame [rad]
  double phi_g = 0.0;      // curve latitude in the P frame [rad]
  Vector3d point;          // W frame [m]
  Vector3d tangent;        // dGamma/ds, W frame [m]
};

// Point and tangent of the rotated curve at parameter s on the sphere of
// radius h_tau.
CurvePoint booth_point(const BoothCurve& curve, double s, double h_tau);

// Arc length of one full period, by adaptive quadrature (rel. tol. 1e-8).
double total_arc_length(const BoothCurve& curve, double h_tau);

struct GammaCoord {
  double s = 0.0;      // curve parameter [rad], wrapped to [0, 2*pi)
  double sigma = 0.0;  // signed geodesic distance to the curve [m]
};

// Curve-attached coordinates of a position. sigma is positive on the side
// of r_hat x t (r_hat the outward normal at the foot point), which makes
// the guidance correction atan(sigma/delta0) steer back toward the curve. The nearest curve
// parameter is located by a coarse scan plus golden-section refinement; ties
// within `tie_tol_m` of the minimum distance are broken by the candidate
// whose tangent best aligns with v_k_tau.
//
// Throws std::domain_error when the point is farther than sigma_max from the
// curve, and std::runtime_error when distinct candidates tie and the velocity
// is too small to disambiguate.
//
// s_hint, when given, selects branch continuity over raw proximity: among
// candidates within the band, one close to the hinted parameter wins even
// if the other branch of the figure eight is momentarily nearer. Streaming
// navigators use this to keep the parameter continuous across the central
// crossing.
GammaCoord to_gamma(const BoothCurve& curve, const SphericalPos& pos,
                    const Vector3d& v_k_tau, double sigma_max,
                    double tie_tol_m = 1e-3,
                    std::optional<double> s_hint = std::nullopt);

// Inverse map: walk the perpendicular geodesic from the foot point.
SphericalPos from_gamma(const BoothCurve& curve, const GammaCoord& coord,
                        double h_tau);

struct GammaRates {
  double s_dot = 0.0;      // [1/s], tangential speed normalized by arc length
  double sigma_dot = 0.0;  // [m/s]
};

// Rates of (s, sigma) from the kinematic velocity in the aircraft tau frame.
// `arc_length` is the full curve arc length at this h_tau (pass the cached
// value from total_arc_length). Throws std::domain_error on a degenerate
// tangent.
GammaRates gamma_rates(const BoothCurve& curve, const GammaCoord& coord,
                       double h_tau, const Vector3d& v_k_tau,
                       double arc_length);

struct CommandedAngles {
  double chi_cmd_tau = 0.0;    // [rad], wrapped to [-pi, pi)
  double gamma_cmd_tau = 0.0;  // identically zero
};

// Guidance command: track the curve tangent, blending toward it from offset
// sigma with tuning length delta0.
CommandedAngles commanded_angles(const BoothCurve& curve,
                                 const GammaCoord& coord, double h_tau,
                                 double delta0);

struct CommandedAnglesNed {
  double chi_cmd = 0.0;    // course command in the O frame [rad]
  double gamma_cmd = 0.0;  // path command in the O frame [rad]
};

// Commanded direction expressed as O-frame course/path angles at the given
// aircraft position. xi is the mean wind direction (W -> O rotation).
CommandedAnglesNed commanded_angles_ned(const BoothCurve& curve,
                                        const GammaCoord& coord,
                                        const SphericalPos& pos, double delta0,
                                        double xi);

}  // namespace awe

#endif  // AWE_BOOTH_HPP_
