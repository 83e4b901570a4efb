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

#include "awe/hj/solver.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "awe/parallel.hpp"

namespace awe::hj {

namespace {
constexpr int kMaxDim = 16;

// Costate at a grid node from neighbor differences: central in the
// interior, one-sided at non-periodic edges, zero on single-node axes.
// Matches costate_at evaluated at the node coordinates.
void node_costate(const ValueFunction& v, std::size_t node, double* q) {
  const Grid& g = v.grid;
  for (int d = 0; d < g.ndim(); ++d) {
    const Axis& ax = g.axis(d);
    if (ax.n == 1) {
      q[d] = 0.0;
      continue;
    }
    const std::size_t stride = g.stride(d);
    const int id = static_cast<int>(node / stride) % ax.n;
    const double dx = ax.step();
    const double vme = v.values[node];
    const bool has_plus = id + 1 < ax.n || ax.periodic;
    const bool has_minus = id > 0 || ax.periodic;
    const std::size_t plus =
        id + 1 < ax.n ? node + stride : node - static_cast<std::size_t>(ax.n - 1) * stride;
    const std::size_t minus =
        id > 0 ? node - stride : node + static_cast<std::size_t>(ax.n - 1) * stride;
    if (has_plus && has_minus) {
      q[d] = (v.values[plus] - v.values[minus]) / (2.0 * dx);
    } else if (has_plus) {
      q[d] = (v.values[plus] - vme) / dx;
    } else {
      q[d] = (vme - v.values[minus]) / dx;
    }
  }
}

}  // namespace

void NodeDynamics::optimal_control_at(std::size_t, const double*, double* alpha,
                                      double* mu) const {
  *alpha = 0.0;
  *mu = 0.0;
}

StepBounds lf_bounds(const NodeDynamics& dyn, double cfl, double dt_max) {
  const Grid& g = dyn.grid();
  const int nd = g.ndim();
  const unsigned workers = thread_count();
  std::vector<Eigen::VectorXd> local(workers,
                                     Eigen::VectorXd::Zero(nd));
  std::atomic<unsigned> wid{0};
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    const unsigned w = wid.fetch_add(1);
    double s[kMaxDim];
    Eigen::VectorXd& acc = local[w];
    for (std::size_t i = b; i < e; ++i) {
      dyn.speed_bounds(i, s);
      for (int d = 0; d < nd; ++d) acc[d] = std::max(acc[d], s[d]);
    }
  });
  StepBounds out;
  out.alpha = Eigen::VectorXd::Zero(nd);
  for (const auto& acc : local)
    for (int d = 0; d < nd; ++d) out.alpha[d] = std::max(out.alpha[d], acc[d]);

  double denom = 0.0;
  for (int d = 0; d < nd; ++d) {
    const Axis& ax = g.axis(d);
    if (ax.n > 1) denom += out.alpha[d] / ax.step();
  }
  out.dt = denom > 0.0 ? cfl / denom : dt_max;
  out.dt = std::min(out.dt, dt_max);
  return out;
}

ValueFunction terminal_value(const NodeDynamics& dyn) {
  const Grid& g = dyn.grid();
  ValueFunction v;
  v.grid = g;
  v.time = 0.0;
  v.values.resize(static_cast<Eigen::Index>(g.size()));

  std::atomic<std::size_t> failures{0};
  std::atomic<std::size_t> first_fail{g.size()};
  std::mutex msg_mutex;
  std::string first_msg;
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      try {
        v.values[i] = std::max(dyn.h_at(i), dyn.l_at(i));
      } catch (const std::exception& ex) {
        failures.fetch_add(1);
        std::size_t expect = g.size();
        if (first_fail.compare_exchange_strong(expect, i)) {
          std::lock_guard<std::mutex> lock(msg_mutex);
          first_msg = ex.what();
        }
        v.values[i] = std::numeric_limits<double>::quiet_NaN();
      }
    }
  });
  if (failures.load() > 0) {
    throw std::runtime_error(
        "terminal_value: " + std::to_string(failures.load()) +
        " node evaluations failed, first at node " +
        std::to_string(first_fail.load()) + ": " + first_msg);
  }
  return v;
}

namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

// One Euler stage of the discretized QVI without the time/clock update.
void qvi_stage(const Grid& g, const double* vals,
               const Eigen::VectorXd& h_values, const NodeDynamics& dyn,
               const StepBounds& bounds, double dt, bool second_order,
               Eigen::VectorXd& out) {
  const int nd = g.ndim();
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    double q_avg[kMaxDim];
    double half_diff[kMaxDim];
    for (std::size_t i = b; i < e; ++i) {
      const double vme = vals[i];
      for (int d = 0; d < nd; ++d) {
        const Axis& ax = g.axis(d);
        if (ax.n == 1) {
          q_avg[d] = 0.0;
          half_diff[d] = 0.0;
          continue;
        }
        const std::size_t stride = g.stride(d);
        const int id = static_cast<int>(i / stride) % ax.n;
        const double dx = ax.step();
        auto value_at = [&](int k) {
          // Index along axis d relative to this node, wrapped on periodic
          // axes; the caller guards non-periodic range.
          int kk = k;
          if (ax.periodic) kk = (k % ax.n + ax.n) % ax.n;
          return vals[i + (static_cast<std::size_t>(kk) - id) * stride];
        };
        const bool has_plus = id + 1 < ax.n || ax.periodic;
        const bool has_minus = id > 0 || ax.periodic;
        double qp = 0.0, qm = 0.0;
        if (has_plus) qp = (value_at(id + 1) - vme) / dx;
        if (has_minus) qm = (vme - value_at(id - 1)) / dx;
        if (second_order) {
          // ENO correction from the limited second differences.
          const bool has_p2 = id + 2 < ax.n || ax.periodic;
          const bool has_m2 = id >= 2 || ax.periodic;
          if (has_plus && has_minus) {
            const double d2_0 =
                (value_at(id + 1) - 2.0 * vme + value_at(id - 1)) / (dx * dx);
            if (has_p2) {
              const double d2_p = (value_at(id + 2) - 2.0 * value_at(id + 1) +
                                   vme) /
                                  (dx * dx);
              qp -= 0.5 * dx * minmod(d2_0, d2_p);
            }
            if (has_m2) {
              const double d2_m = (vme - 2.0 * value_at(id - 1) +
                                   value_at(id - 2)) /
                                  (dx * dx);
              qm += 0.5 * dx * minmod(d2_0, d2_m);
            }
          }
        }
        if (!has_plus) qp = qm;
        if (!has_minus) qm = qp;
        q_avg[d] = 0.5 * (qp + qm);
        half_diff[d] = 0.5 * (qp - qm);
      }
      const double ham = dyn.hamiltonian(i, q_avg);
      // Local Lax-Friedrichs: dissipation from the node's own speed bound,
      // capped by the global coefficients that set the CFL step.
      double local[kMaxDim];
      dyn.speed_bounds(i, local);
      double diss = 0.0;
      for (int d = 0; d < nd; ++d)
        diss += std::min(local[d], bounds.alpha[d]) * half_diff[d];
      out[i] = std::max(h_values[i], vme + dt * (ham + diss));
    }
  });
}

}  // namespace

void qvi_step(ValueFunction& v, const Eigen::VectorXd& h_values,
              const NodeDynamics& dyn, const StepBounds& bounds, double dt,
              bool second_order) {
  const Grid& g = v.grid;
  if (g.ndim() > kMaxDim)
    throw std::invalid_argument("qvi_step: too many axes");
  if (dt > bounds.dt * (1.0 + 1e-12))
    throw std::invalid_argument("qvi_step: dt exceeds the CFL bound");
  if (h_values.size() != v.values.size())
    throw std::invalid_argument("qvi_step: h array size mismatch");

  Eigen::VectorXd next(v.values.size());
  if (!second_order) {
    qvi_stage(g, v.values.data(), h_values, dyn, bounds, dt, false, next);
  } else {
    // Two-stage TVD Runge-Kutta (Heun): average of chained Euler stages,
    // projected after every stage.
    Eigen::VectorXd stage2(v.values.size());
    qvi_stage(g, v.values.data(), h_values, dyn, bounds, dt, true, next);
    qvi_stage(g, next.data(), h_values, dyn, bounds, dt, true, stage2);
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i)
        next[i] = std::max(h_values[i],
                           0.5 * (v.values[i] + stage2[i]));
    });
  }
  v.values.swap(next);
  v.time -= dt;
}

SolveResult solve_brs(const NodeDynamics& dyn, double horizon,
                      const SolveOptions& opts) {
  if (horizon < 0.0) throw std::invalid_argument("solve_brs: horizon < 0");
  const Grid& g = dyn.grid();

  SolveResult result;
  result.bounds = opts.fixed_bounds ? *opts.fixed_bounds
                                    : lf_bounds(dyn, opts.cfl, opts.dt_max);
  result.value = terminal_value(dyn);

  Eigen::VectorXd h_values(result.value.values.size());
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) h_values[i] = dyn.h_at(i);
  });

  int n_steps = 0;
  if (horizon > 0.0) {
    n_steps = static_cast<int>(std::ceil(horizon / result.bounds.dt - 1e-12));
    n_steps = std::max(n_steps, 1);
  }
  const double dt = n_steps > 0 ? horizon / n_steps : 0.0;

  for (int step = 0; step < n_steps; ++step) {
    qvi_step(result.value, h_values, dyn, result.bounds, dt,
             opts.second_order);
    std::atomic<bool> bad{false};
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        if (!std::isfinite(result.value.values[i])) {
          bad.store(true);
          break;
        }
      }
    });
    if (bad.load())
      throw std::runtime_error("solve_brs: divergence at step " +
                               std::to_string(step));
    if (opts.observer) opts.observer(step, result.value);
  }
  result.steps = n_steps;

  result.controls.grid = g;
  result.controls.alpha.resize(result.value.values.size());
  result.controls.mu.resize(result.value.values.size());
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    double q[kMaxDim];
    for (std::size_t i = b; i < e; ++i) {
      node_costate(result.value, i, q);
      double a, m;
      dyn.optimal_control_at(i, q, &a, &m);
      result.controls.alpha[i] = a;
      result.controls.mu[i] = m;
    }
  });
  return result;
}

// ---------------------------------------------------------------------------
// SafetyNodeDynamics

struct SafetyNodeDynamics::Tables {
  // Axis samples.
  std::vector<double> s_v, sig_v, h_v, v_v, chi_v, gam_v, dt_v;
  int ns, nsig, nh, nv, nchi, ngam, ndt;

  struct Cell {
    Vector3d tn;         // t_tau / (|t| l_gamma)
    Vector3d tp;         // t_perp_tau / |t_perp|
    Vector3d shear_tau;  // R * shear_O
    Vector3d ow_rhat;    // M_OW * r_hat(aircraft)
    Matrix3d m_tau;
    double l1_tn, l1_tp, l1_ez;  // |M_tau^T w|_1 for the disturbance bound
    double cmd_chi, cmd_gamma;   // commanded angles in O
  };
  std::vector<Cell> cells;            // (is * nsig + isig) * nh + ih
  std::vector<Vector3d> b1;           // cell x pair: R * u_dir_O
  std::vector<Vector3d> a2;           // cell x pair: M_AbarO * ow_rhat
  struct Pair {
    double sin_g, cos_g;
  };
  std::vector<Pair> pairs;            // ichi * ngam + igam

  std::vector<double> a_rot, b_rot, c_lat;  // per control-grid alpha
  std::vector<double> cos_mu, sin_mu;
  double amax = 0.0, latmax = 0.0;

  double m_a, g_acc, k_spring, c_damp, frup, h_scale, dmax_dt, dmax_turb;
  int n_seg1;
};

SafetyNodeDynamics::SafetyNodeDynamics(const SafetyModel& model, Grid grid)
    : model_(model), grid_(std::move(grid)), tables_(new Tables) {
  if (grid_.ndim() != 7)
    throw std::invalid_argument("safety dynamics: grid must have 7 axes");
  Tables& t = *tables_;
  auto fill_axis = [&](int d, std::vector<double>& out) {
    out.resize(grid_.axis(d).n);
    for (int i = 0; i < grid_.axis(d).n; ++i) out[i] = grid_.axis(d).coord(i);
    return grid_.axis(d).n;
  };
  t.ns = fill_axis(0, t.s_v);
  t.nsig = fill_axis(1, t.sig_v);
  t.nh = fill_axis(2, t.h_v);
  t.nv = fill_axis(3, t.v_v);
  t.nchi = fill_axis(4, t.chi_v);
  t.ngam = fill_axis(5, t.gam_v);
  t.ndt = fill_axis(6, t.dt_v);

  const SafetyModelParams& p = model.params();
  t.m_a = p.aircraft.m_a;
  t.g_acc = p.aircraft.g;
  t.k_spring = p.tether.k;
  t.c_damp = p.tether.c;
  t.n_seg1 = p.tether.n + 1;
  t.frup = p.f_rupture;
  t.h_scale = p.h_weight * p.f_rupture;
  t.dmax_dt = p.dist.d_delta_t_max;
  t.dmax_turb = p.dist.d_turb_max;

  std::vector<double> l_gamma(t.nh);
  for (int ih = 0; ih < t.nh; ++ih)
    l_gamma[ih] = total_arc_length(p.curve, t.h_v[ih]);

  t.pairs.resize(static_cast<std::size_t>(t.nchi) * t.ngam);
  std::vector<Vector3d> u_dir(t.pairs.size());
  std::vector<Matrix3d> m_abar_o(t.pairs.size());
  for (int ic = 0; ic < t.nchi; ++ic) {
    for (int ig = 0; ig < t.ngam; ++ig) {
      const std::size_t pc = static_cast<std::size_t>(ic) * t.ngam + ig;
      const double chi = t.chi_v[ic], gam = t.gam_v[ig];
      t.pairs[pc].sin_g = std::sin(gam);
      t.pairs[pc].cos_g = std::cos(gam);
      m_abar_o[pc] = rotation_abar_o(chi, gam);
      u_dir[pc] = m_abar_o[pc].row(0).transpose();  // M_OAbar e1
    }
  }

  const std::size_t ncell =
      static_cast<std::size_t>(t.ns) * t.nsig * t.nh;
  t.cells.resize(ncell);
  t.b1.resize(ncell * t.pairs.size());
  t.a2.resize(ncell * t.pairs.size());
  const Matrix3d m_ow = rotation_ow(p.wind.xi);

  parallel_for(ncell, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      const int ih = static_cast<int>(c % t.nh);
      const int isig = static_cast<int>((c / t.nh) % t.nsig);
      const int is = static_cast<int>(c / (static_cast<std::size_t>(t.nh) * t.nsig));
      const double s = t.s_v[is], sig = t.sig_v[isig], h = t.h_v[ih];

      Tables::Cell& cell = t.cells[c];
      const GammaCoord gc{s, sig};
      const SphericalPos pos = from_gamma(p.curve, gc, h);
      const CurvePoint cp = booth_point(p.curve, s, h);
      const Vector3d r_hat_foot = cp.point / h;
      const Vector3d t_perp = r_hat_foot.cross(cp.tangent);

      cell.m_tau = rotation_tau_w(pos.lambda, pos.phi);
      cell.tn = cell.m_tau * cp.tangent / (cp.tangent.norm() * l_gamma[ih]);
      cell.tp = cell.m_tau * t_perp / t_perp.norm();
      const Vector3d pw = cart_from_spherical(pos);
      const double altitude = std::max(1e-3, pw.z());
      const Matrix3d rot = cell.m_tau * m_ow.transpose();
      cell.shear_tau = rot * wind_shear(altitude, p.wind);
      cell.ow_rhat = m_ow * (pw / pos.h_tau);
      cell.l1_tn = (cell.m_tau.transpose() * cell.tn).lpNorm<1>();
      cell.l1_tp = (cell.m_tau.transpose() * cell.tp).lpNorm<1>();
      cell.l1_ez = cell.m_tau.row(2).lpNorm<1>();
      const CommandedAnglesNed cmd =
          commanded_angles_ned(p.curve, gc, pos, p.delta0, p.wind.xi);
      cell.cmd_chi = cmd.chi_cmd;
      cell.cmd_gamma = cmd.gamma_cmd;

      for (std::size_t pc = 0; pc < t.pairs.size(); ++pc) {
        t.b1[c * t.pairs.size() + pc] = rot * u_dir[pc];
        t.a2[c * t.pairs.size() + pc] = m_abar_o[pc] * cell.ow_rhat;
      }
    }
  });

  const double scale = 0.5 * p.aircraft.rho * p.aircraft.s_ref;
  for (double alpha : p.ctrl.alphas) {
    const AeroCoeffs c = aero_coeffs(alpha, p.aircraft);
    const double a = scale * c.cx, b = scale * c.cz, cl = scale * c.cy;
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    t.a_rot.push_back(a * ca + b * sa);
    t.b_rot.push_back(b * ca - a * sa);
    t.c_lat.push_back(cl);
    t.amax = std::max(t.amax, std::abs(t.a_rot.back()));
    t.latmax = std::max(t.latmax, std::hypot(cl, t.b_rot.back()));
  }
  for (double mu : p.ctrl.mus) {
    t.cos_mu.push_back(std::cos(mu));
    t.sin_mu.push_back(std::sin(mu));
  }
}

SafetyNodeDynamics::~SafetyNodeDynamics() = default;

const Grid& SafetyNodeDynamics::grid() const { return grid_; }

namespace {
struct NodeIdx {
  int is, isig, ih, iv, ichi, igam, idt;
};
}  // namespace

#define AWE_DECODE_NODE(t, node)                                        \
  NodeIdx ni;                                                           \
  {                                                                     \
    std::size_t rem = node;                                             \
    ni.idt = static_cast<int>(rem % (t).ndt);                           \
    rem /= (t).ndt;                                                     \
    ni.igam = static_cast<int>(rem % (t).ngam);                         \
    rem /= (t).ngam;                                                    \
    ni.ichi = static_cast<int>(rem % (t).nchi);                         \
    rem /= (t).nchi;                                                    \
    ni.iv = static_cast<int>(rem % (t).nv);                             \
    rem /= (t).nv;                                                      \
    ni.ih = static_cast<int>(rem % (t).nh);                             \
    rem /= (t).nh;                                                      \
    ni.isig = static_cast<int>(rem % (t).nsig);                         \
    ni.is = static_cast<int>(rem / (t).nsig);                           \
  }

SafetyState SafetyNodeDynamics::state_at(std::size_t node) const {
  const Tables& t = *tables_;
  AWE_DECODE_NODE(t, node)
  SafetyState x;
  x.s = t.s_v[ni.is];
  x.sigma = t.sig_v[ni.isig];
  x.h_tau = t.h_v[ni.ih];
  x.v_a = t.v_v[ni.iv];
  x.chi_a = t.chi_v[ni.ichi];
  x.gamma_a = t.gam_v[ni.igam];
  x.delta_t = t.dt_v[ni.idt];
  return x;
}

double SafetyNodeDynamics::hamiltonian(std::size_t node, const double* q) const {
  const Tables& t = *tables_;
  AWE_DECODE_NODE(t, node)
  const std::size_t cell =
      (static_cast<std::size_t>(ni.is) * t.nsig + ni.isig) * t.nh + ni.ih;
  const std::size_t pair = static_cast<std::size_t>(ni.ichi) * t.ngam + ni.igam;
  const Tables::Cell& C = t.cells[cell];
  const Tables::Pair& P = t.pairs[pair];
  const double v = t.v_v[ni.iv];
  const double dt_state = t.dt_v[ni.idt];

  const Vector3d v_k0 = v * t.b1[cell * t.pairs.size() + pair] + C.shear_tau;
  const double hdot0 = -v_k0.z();
  const double tension =
      std::max(0.0, t.k_spring * dt_state + t.c_damp * hdot0 / t.n_seg1);
  const Vector3d& a2 = t.a2[cell * t.pairs.size() + pair];

  const double r1 = C.tn.dot(v_k0);
  const double r2 = C.tp.dot(v_k0);
  const double r3 = hdot0;
  const double r4 = -tension * a2.x() / t.m_a - t.g_acc * P.sin_g;
  const double r5 = -tension * a2.y() / (t.m_a * v * P.cos_g);
  const double r6 = (tension * a2.z() - t.m_a * t.g_acc * P.cos_g) /
                    (t.m_a * v);

  double q_fc = q[0] * r1 + q[1] * r2 + q[2] * r3 + q[3] * r4 + q[4] * r5 +
                q[5] * r6;
  if (!zero_disturbance_) {
    const Vector3d rr =
        q[0] * C.tn + q[1] * C.tp - q[2] * Vector3d::UnitZ();
    const Vector3d coef = C.m_tau.transpose() * rr;
    q_fc += t.dmax_turb * coef.lpNorm<1>() + std::abs(q[6]) * t.dmax_dt;
  }

  double best = std::numeric_limits<double>::infinity();
  const std::size_t na = t.a_rot.size(), nm = t.cos_mu.size();
  for (std::size_t k = 0; k < na; ++k) {
    const double q3va = q[3] * v * t.a_rot[k];
    const double b = t.b_rot[k], cl = t.c_lat[k];
    for (std::size_t j = 0; j < nm; ++j) {
      const double obj = q3va +
                         (q[4] / P.cos_g) * (cl * t.cos_mu[j] - b * t.sin_mu[j]) -
                         q[5] * (cl * t.sin_mu[j] + b * t.cos_mu[j]);
      if (obj < best) best = obj;
    }
  }
  return (v / t.m_a) * best + q_fc;
}

void SafetyNodeDynamics::speed_bounds(std::size_t node, double* out) const {
  const Tables& t = *tables_;
  AWE_DECODE_NODE(t, node)
  const std::size_t cell =
      (static_cast<std::size_t>(ni.is) * t.nsig + ni.isig) * t.nh + ni.ih;
  const std::size_t pair = static_cast<std::size_t>(ni.ichi) * t.ngam + ni.igam;
  const Tables::Cell& C = t.cells[cell];
  const Tables::Pair& P = t.pairs[pair];
  const double v = t.v_v[ni.iv];
  const double dt_state = t.dt_v[ni.idt];

  const Vector3d v_k0 = v * t.b1[cell * t.pairs.size() + pair] + C.shear_tau;
  const double hdot0 = -v_k0.z();
  const double tension =
      std::max(0.0, t.k_spring * dt_state + t.c_damp * hdot0 / t.n_seg1);
  const Vector3d& a2 = t.a2[cell * t.pairs.size() + pair];
  // Bounds always cover the full disturbance box so the scheme (dissipation
  // and CFL) is unchanged by set_zero_disturbance; the box bound stays a
  // valid upper bound for the restricted game.
  const double dmax = t.dmax_turb;

  const double v2m = v * v / t.m_a;
  out[0] = std::abs(C.tn.dot(v_k0)) + dmax * C.l1_tn;
  out[1] = std::abs(C.tp.dot(v_k0)) + dmax * C.l1_tp;
  out[2] = std::abs(hdot0) + dmax * C.l1_ez;
  out[3] = v2m * t.amax +
           std::abs(-tension * a2.x() / t.m_a - t.g_acc * P.sin_g);
  out[4] = v2m * t.latmax / (v * std::abs(P.cos_g)) +
           std::abs(tension * a2.y() / (t.m_a * v * P.cos_g));
  out[5] = v2m * t.latmax / v +
           std::abs((tension * a2.z() - t.m_a * t.g_acc * P.cos_g) /
                    (t.m_a * v));
  out[6] = t.dmax_dt;
}

double SafetyNodeDynamics::h_at(std::size_t node) const {
  const Tables& t = *tables_;
  AWE_DECODE_NODE(t, node)
  const std::size_t cell =
      (static_cast<std::size_t>(ni.is) * t.nsig + ni.isig) * t.nh + ni.ih;
  const std::size_t pair = static_cast<std::size_t>(ni.ichi) * t.ngam + ni.igam;
  const Tables::Cell& C = t.cells[cell];
  const double v = t.v_v[ni.iv];
  const Vector3d v_k0 = v * t.b1[cell * t.pairs.size() + pair] + C.shear_tau;
  const double tension = std::max(
      0.0, t.k_spring * t.dt_v[ni.idt] + t.c_damp * (-v_k0.z()) / t.n_seg1);
  return (tension - t.frup) / t.h_scale;
}

double SafetyNodeDynamics::l_at(std::size_t node) const {
  const Tables& t = *tables_;
  AWE_DECODE_NODE(t, node)
  const std::size_t cell =
      (static_cast<std::size_t>(ni.is) * t.nsig + ni.isig) * t.nh + ni.ih;
  const Tables::Cell& C = t.cells[cell];
  const double e_chi = std::abs(wrap_angle(C.cmd_chi - t.chi_v[ni.ichi]));
  const double e_gam = std::abs(wrap_angle(C.cmd_gamma - t.gam_v[ni.igam]));
  return (std::max(e_chi, e_gam) - model_.params().eps_align) / M_PI;
}

void SafetyNodeDynamics::optimal_control_at(std::size_t node, const double* q,
                                            double* alpha, double* mu) const {
  const Tables& t = *tables_;
  AWE_DECODE_NODE(t, node)
  const Tables::Pair& P =
      t.pairs[static_cast<std::size_t>(ni.ichi) * t.ngam + ni.igam];
  const double v = t.v_v[ni.iv];

  double best = std::numeric_limits<double>::infinity();
  std::size_t bk = 0, bj = 0;
  const std::size_t na = t.a_rot.size(), nm = t.cos_mu.size();
  for (std::size_t k = 0; k < na; ++k) {
    const double q3va = q[3] * v * t.a_rot[k];
    const double b = t.b_rot[k], cl = t.c_lat[k];
    for (std::size_t j = 0; j < nm; ++j) {
      const double obj = q3va +
                         (q[4] / P.cos_g) * (cl * t.cos_mu[j] - b * t.sin_mu[j]) -
                         q[5] * (cl * t.sin_mu[j] + b * t.cos_mu[j]);
      if (obj < best) {
        best = obj;
        bk = k;
        bj = j;
      }
    }
  }
  *alpha = model_.params().ctrl.alphas[bk];
  *mu = model_.params().ctrl.mus[bj];
}

#undef AWE_DECODE_NODE

Grid default_safety_grid() {
  std::vector<Axis> axes(7);
  axes[0] = {31, 0.0, 2.0 * M_PI, true};    // s
  axes[1] = {7, -60.0, 60.0, false};        // sigma
  axes[2] = {5, 200.0, 360.0, false};       // h_tau
  axes[3] = {7, 15.0, 45.0, false};         // v_a
  axes[4] = {9, -M_PI, M_PI, true};         // chi_a
  axes[5] = {7, -1.2, 1.2, false};          // gamma_a
  axes[6] = {5, -0.005, 0.045, false};      // delta_t
  return Grid(axes);
}

}  // namespace awe::hj
