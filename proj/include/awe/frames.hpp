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

#ifndef AWE_FRAMES_HPP_
#define AWE_FRAMES_HPP_

#include <Eigen/Dense>
#include <span>

namespace awe {

// Frames used throughout:
//   O  - North-East-Down at the ground station.
//   W  - wind frame: x along the mean wind direction, z up.
//   tau - local frame at the aircraft on the sphere: x north, y along
//         increasing longitude, z toward the origin.
//   Abar - intermediate aerodynamic frame (course chi, path gamma off O).
//   A  - aerodynamic frame (bank mu off Abar).
//   B  - body-fixed frame (angle of attack alpha, sideslip beta off A).
//   P  - curve construction frame (rotated into W by psi0).

using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;

// Direction-cosine matrices. Names follow M_<dst><src>: the returned matrix
// maps src-frame coordinates into dst-frame coordinates. All are proper
// rotations; the inverse is the transpose.
Matrix3d rotation_ab(double alpha, double beta);          // A <- B
Matrix3d rotation_tau_w(double lambda, double phi);       // tau <- W
Matrix3d rotation_ow(double xi);                          // O <- W (involution)
Matrix3d rotation_abar_a(double mu);                      // Abar <- A
Matrix3d rotation_abar_o(double chi, double gamma);       // Abar <- O
Matrix3d rotation_wp(double psi0);                        // W <- P

enum class FramePair { kAB, kTauW, kOW, kAbarA, kAbarO, kWP };

// Dispatcher over the named rotations; `inverse` returns the transpose.
// Throws std::domain_error on non-finite angles or an angle-count mismatch.
Matrix3d build_rotation(FramePair kind, std::span<const double> angles,
                        bool inverse = false);

struct SphericalPos {
  double lambda = 0.0;  // longitude [rad], wrapped to [-pi, pi)
  double phi = 0.0;     // latitude [rad], in (-pi/2, pi/2)
  double h_tau = 0.0;   // radial distance [m], > 0
};

// Wraps an angle to [-pi, pi).
double wrap_angle(double a);

// W-frame Cartesian position <-> spherical coordinates.
// spherical_from_cart throws std::domain_error within 1e-9 rad of the poles
// (longitude degenerates); cart_from_spherical is total.
Vector3d cart_from_spherical(const SphericalPos& p);
SphericalPos spherical_from_cart(const Vector3d& p);

struct GeodesicResult {
  double distance = 0.0;   // great-circle distance [m]
  Vector2d direction;      // unit departure direction at `from`, tau (x,y)
};

// Great-circle distance and initial direction between two points on the
// sphere of the given radius. Coincident points return distance 0 with a
// zero direction; antipodal pairs throw std::domain_error (the direction
// is not unique).
GeodesicResult geodesic(const SphericalPos& from, const SphericalPos& to,
                        double radius);

}  // namespace awe

#endif  // AWE_FRAMES_HPP_
