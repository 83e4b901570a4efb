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

#include "awe/wind.hpp"

#include <cmath>
#include <stdexcept>

#include "awe/frames.hpp"

namespace awe {

namespace {
constexpr double kMetersPerFoot = 0.3048;
constexpr double kShearFloorFt = 3.0;
constexpr double kLowBankCeilFt = 1000.0;
constexpr double kHighBankFloorFt = 2000.0;
constexpr double kHighAltLengthFt = 1750.0;

uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Scale lengths [m] and intensities [m/s] for one filter bank.
struct BankParams {
  double l_u, l_v, l_w;
  double sigma_u, sigma_v, sigma_w;
};

BankParams low_altitude_params(double h_ft, double w20) {
  BankParams p;
  const double h = std::clamp(h_ft, 10.0, kLowBankCeilFt);
  const double base = 0.177 + 0.000823 * h;
  p.l_w = h * kMetersPerFoot;
  p.l_u = h / std::pow(base, 1.2) * kMetersPerFoot;
  p.l_v = p.l_u;
  p.sigma_w = 0.1 * w20;
  p.sigma_u = p.sigma_w / std::pow(base, 0.4);
  p.sigma_v = p.sigma_u;
  return p;
}

BankParams high_altitude_params(double w20) {
  BankParams p;
  p.l_u = p.l_v = p.l_w = kHighAltLengthFt * kMetersPerFoot;
  p.sigma_u = p.sigma_v = p.sigma_w = 0.1 * w20;
  return p;
}

// First-order forming filter, exact zero-order-hold step. The stationary
// standard deviation of the state equals sigma for any dt.
double step_first_order(double x, double a, double sigma, double dt,
                        double eta) {
  const double e = std::exp(-a * dt);
  return e * x + sigma * std::sqrt(std::max(0.0, 1.0 - e * e)) * eta;
}

// Second-order forming filter with double pole at -a and zero at -a/sqrt(3),
// output y = kappa * (x1 + sqrt(3)/a * x2), kappa = sigma * a^(3/2).
// Exact ZOH discretization: state transition exp(A dt) for the companion
// form A = [[0,1],[-a^2,-2a]] and process-noise covariance integrated in
// closed form, injected through its Cholesky factor.
void step_second_order(Eigen::Vector2d& x, double a, double dt, double eta1,
                       double eta2) {
  const double e = std::exp(-a * dt);
  const double ad11 = e * (1.0 + a * dt);
  const double ad12 = e * dt;
  const double ad21 = -e * a * a * dt;
  const double ad22 = e * (1.0 - a * dt);

  const double b = 2.0 * a;
  const double eb = std::exp(-b * dt);
  const double i0 = (1.0 - eb) / b;
  const double i1 = (1.0 - eb * (1.0 + b * dt)) / (b * b);
  const double i2 =
      (2.0 - eb * (b * b * dt * dt + 2.0 * b * dt + 2.0)) / (b * b * b);
  const double q11 = i2;
  const double q12 = i1 - a * i2;
  const double q22 = i0 - 2.0 * a * i1 + a * a * i2;

  const double l11 = std::sqrt(std::max(0.0, q11));
  const double l21 = l11 > 0.0 ? q12 / l11 : 0.0;
  const double l22 = std::sqrt(std::max(0.0, q22 - l21 * l21));

  const double x1 = ad11 * x[0] + ad12 * x[1] + l11 * eta1;
  const double x2 = ad21 * x[0] + ad22 * x[1] + l21 * eta1 + l22 * eta2;
  x[0] = x1;
  x[1] = x2;
}

double second_order_output(const Eigen::Vector2d& x, double a, double sigma) {
  const double kappa = sigma * std::pow(a, 1.5);
  return kappa * (x[0] + std::sqrt(3.0) / a * x[1]);
}

}  // namespace

double wind_shear_magnitude(double h_m, const WindParams& p) {
  if (h_m <= 0.0) throw std::domain_error("wind_shear: altitude must be > 0");
  const double h_ft = std::max(h_m / kMetersPerFoot, kShearFloorFt);
  return p.w20 * std::log(h_ft / p.z0_ft) / std::log(20.0 / p.z0_ft);
}

Vector3d wind_shear(double h_m, const WindParams& p) {
  const double mag = wind_shear_magnitude(h_m, p);
  // Shear blows along the W x-axis; rotate into O.
  return rotation_ow(p.xi) * Vector3d(mag, 0.0, 0.0);
}

uint64_t CounterRng::next_u64() { return splitmix64(key_ + counter_++); }

double CounterRng::next_double() {
  // 53-bit mantissa, strictly inside (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

DrydenFilter::DrydenFilter(const WindParams& p)
    : params_(p), rng_(p.seed, /*stream=*/7) {}

Vector3d DrydenFilter::design_sigma(double h_m) const {
  const double h_ft = h_m / kMetersPerFoot;
  const BankParams lo = low_altitude_params(h_ft, params_.w20);
  const BankParams hi = high_altitude_params(params_.w20);
  double w = (h_ft - kLowBankCeilFt) / (kHighBankFloorFt - kLowBankCeilFt);
  w = std::clamp(w, 0.0, 1.0);
  return Vector3d((1.0 - w) * lo.sigma_u + w * hi.sigma_u,
                  (1.0 - w) * lo.sigma_v + w * hi.sigma_v,
                  (1.0 - w) * lo.sigma_w + w * hi.sigma_w);
}

Vector3d DrydenFilter::step(double dt, double h_m, double airspeed) {
  Eigen::Matrix<double, 5, 1> eta;
  for (int i = 0; i < 5; ++i) eta[i] = rng_.next_gaussian();
  return step_with_noise(dt, h_m, airspeed, eta);
}

Vector3d DrydenFilter::step_with_noise(double dt, double h_m, double airspeed,
                                       const Eigen::Matrix<double, 5, 1>& eta) {
  if (dt <= 0.0) throw std::domain_error("dryden: dt must be > 0");
  if (airspeed <= 0.0) throw std::domain_error("dryden: airspeed must be > 0");
  const double h_ft = h_m / kMetersPerFoot;
  const BankParams lo = low_altitude_params(h_ft, params_.w20);
  const BankParams hi = high_altitude_params(params_.w20);

  auto advance = [&](Bank& bank, const BankParams& bp) -> Vector3d {
    const double au = airspeed / bp.l_u;
    const double av = airspeed / bp.l_v;
    const double aw = airspeed / bp.l_w;
    bank.u = step_first_order(bank.u, au, bp.sigma_u, dt, eta[0]);
    step_second_order(bank.v, av, dt, eta[1], eta[2]);
    step_second_order(bank.w, aw, dt, eta[3], eta[4]);
    return Vector3d(bank.u, second_order_output(bank.v, av, bp.sigma_v),
                    second_order_output(bank.w, aw, bp.sigma_w));
  };

  const Vector3d out_lo = advance(low_, lo);
  const Vector3d out_hi = advance(high_, hi);
  double w = (h_ft - kLowBankCeilFt) / (kHighBankFloorFt - kLowBankCeilFt);
  w = std::clamp(w, 0.0, 1.0);
  const Vector3d out = (1.0 - w) * out_lo + w * out_hi;

  const Vector3d sigma = design_sigma(h_m);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(out[i]) > 4.0 * sigma[i]) ++exceedances_;
    if (std::abs(out[i]) > params_.d_turb_max) ++d_max_exceedances_;
  }
  return out;
}

}  // namespace awe
