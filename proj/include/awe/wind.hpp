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

#ifndef AWE_WIND_HPP_
#define AWE_WIND_HPP_

#include <cstdint>

#include <Eigen/Dense>

namespace awe {

using Eigen::Vector3d;

struct WindParams {
  double w20 = 9.0;          // [m/s] wind speed measured at 20 ft
  double z0_ft = 0.15;       // [ft] roughness constant
  double xi = M_PI;          // [rad] mean wind direction
  double d_turb_max = 4.0;   // [m/s] adversarial turbulence bound
  uint64_t seed = 1;         // turbulence noise seed
};

// Logarithmic shear profile, evaluated with the altitude converted to feet
// and clamped below at 3 ft. Returns the wind vector in the O frame.
// Throws std::domain_error for h <= 0.
Vector3d wind_shear(double h_m, const WindParams& p);

// Shear magnitude only [m/s]; same clamp rule.
double wind_shear_magnitude(double h_m, const WindParams& p);

inline Vector3d wind_total(const Vector3d& shear, const Vector3d& turb) {
  return shear + turb;
}

// Counter-based PRNG (splitmix64 over a keyed counter) so runs are
// bit-reproducible independent of platform library details.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : key_(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))), counter_(0) {}

  uint64_t next_u64();
  double next_double();           // uniform in (0, 1)
  double next_gaussian();         // standard normal (Box-Muller)

 private:
  uint64_t key_;
  uint64_t counter_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Continuous Dryden gust model: band-limited white noise through the
// low-altitude (< 1000 ft) and high-altitude (> 2000 ft) forming-filter
// banks, output linearly blended in between. Filters are discretized by
// exact zero-order hold at the step size, so the stationary output variance
// matches the design sigma for any dt.
class DrydenFilter {
 public:
  explicit DrydenFilter(const WindParams& p);

  // Advance one step and return (u_g, v_g, w_g) in the W frame [m/s].
  Vector3d step(double dt, double h_m, double airspeed);

  // Same, with caller-supplied standard-normal noise (tests). The five
  // channels drive (u, v1, v2, w1, w2) and are shared by both filter banks.
  Vector3d step_with_noise(double dt, double h_m, double airspeed,
                           const Eigen::Matrix<double, 5, 1>& eta);

  // Design standard deviations (sigma_u, sigma_v, sigma_w) at an altitude.
  Vector3d design_sigma(double h_m) const;

  // Count of samples so far whose |component| exceeded 4 * design sigma.
  int64_t bound_exceedances() const { return exceedances_; }
  // Count of samples whose |component| exceeded d_turb_max.
  int64_t d_max_exceedances() const { return d_max_exceedances_; }

 private:
  struct Bank {
    double u = 0.0;                    // first-order state
    Eigen::Vector2d v{0.0, 0.0};       // second-order states
    Eigen::Vector2d w{0.0, 0.0};
  };

  WindParams params_;
  CounterRng rng_;
  Bank low_;
  Bank high_;
  int64_t exceedances_ = 0;
  int64_t d_max_exceedances_ = 0;
};

}  // namespace awe

#endif  // AWE_WIND_HPP_
