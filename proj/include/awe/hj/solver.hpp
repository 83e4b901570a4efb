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

#ifndef AWE_HJ_SOLVER_HPP_
#define AWE_HJ_SOLVER_HPP_

#include <functional>
#include <memory>
#include <optional>

#include "awe/hj/value_function.hpp"
#include "awe/safety_model.hpp"

namespace awe::hj {

// Per-node dynamics for the level-set stepper. The grid is fixed at
// construction; nodes are addressed by flat index.
class NodeDynamics {
 public:
  virtual ~NodeDynamics() = default;
  virtual const Grid& grid() const = 0;
  // min over controls, max over disturbances of q . f at the node.
  virtual double hamiltonian(std::size_t node, const double* q) const = 0;
  // Per-axis upper bound on |f_i| over the admissible inputs at the node.
  virtual void speed_bounds(std::size_t node, double* out) const = 0;
  virtual double h_at(std::size_t node) const = 0;
  virtual double l_at(std::size_t node) const = 0;
  // Control recorded into the exported table (models without controls keep
  // the default zeros).
  virtual void optimal_control_at(std::size_t node, const double* q,
                                  double* alpha, double* mu) const;
};

struct StepBounds {
  Eigen::VectorXd alpha;  // per-axis Lax-Friedrichs dissipation
  double dt = 0.0;        // CFL-limited step
};

// Global dissipation coefficients alpha_i >= max |f_i| and the CFL step
// dt = cfl / sum_i(alpha_i / dx_i), capped at dt_max.
StepBounds lf_bounds(const NodeDynamics& dyn, double cfl = 0.5,
                     double dt_max = 0.1);

// Nodewise max{h, l} at horizon 0. Node evaluation failures are collected
// and reported together with the first failing node index.
ValueFunction terminal_value(const NodeDynamics& dyn);

// One explicit step of V_t + H = 0 backward in time (local Lax-Friedrichs
// numerical Hamiltonian, upwinded one-sided differences), followed by the
// projection V <- max(V, h). h_values must hold h per node. Throws a
// step-size error when dt exceeds the CFL bound. With second_order the
// one-sided differences carry a minmod-limited ENO correction.
void qvi_step(ValueFunction& v, const Eigen::VectorXd& h_values,
              const NodeDynamics& dyn, const StepBounds& bounds, double dt,
              bool second_order = false);

struct SolveOptions {
  double cfl = 0.5;
  double dt_max = 0.05;
  // Second-order scheme: ENO spatial differences with a two-stage
  // total-variation-diminishing Runge-Kutta step (first-order upwind
  // Lax-Friedrichs with explicit Euler is the baseline).
  bool second_order = false;
  // Reuse externally fixed bounds (e.g. to compare runs across disturbance
  // sets under identical dissipation).
  std::optional<StepBounds> fixed_bounds;
  // Called after every step with the step index and current values.
  std::function<void(int, const ValueFunction&)> observer;
};

struct SolveResult {
  ValueFunction value;    // V at horizon -T
  ControlTable controls;  // argmin controls from the final costates
  StepBounds bounds;
  int steps = 0;
};

// Iterates the QVI from the terminal condition to horizon -T and records
// the optimal control per node from the final value function.
SolveResult solve_brs(const NodeDynamics& dyn, double horizon,
                      const SolveOptions& opts = {});

// Cached adapter binding the 7-state safety model to a grid with axis order
// (s, sigma, h_tau, v_a, chi_a, gamma_a, delta_t). Geometry shared by all
// (v, chi, gamma, delta_t) combinations is precomputed per (s, sigma,
// h_tau) cell, so per-node Hamiltonian evaluation is table-driven.
class SafetyNodeDynamics : public NodeDynamics {
 public:
  SafetyNodeDynamics(const SafetyModel& model, Grid grid);
  ~SafetyNodeDynamics() override;

  const Grid& grid() const override;
  double hamiltonian(std::size_t node, const double* q) const override;
  void speed_bounds(std::size_t node, double* out) const override;
  double h_at(std::size_t node) const override;
  double l_at(std::size_t node) const override;
  void optimal_control_at(std::size_t node, const double* q, double* alpha,
                          double* mu) const override;

  SafetyState state_at(std::size_t node) const;
  // Disables the disturbance set (D = {0}) for monotonicity experiments.
  void set_zero_disturbance(bool on) { zero_disturbance_ = on; }

 private:
  struct Tables;
  const SafetyModel& model_;
  Grid grid_;
  std::unique_ptr<Tables> tables_;
  bool zero_disturbance_ = false;
};

// Default 7-axis synthesis grid (counts per the desk-scale defaults).
Grid default_safety_grid();

}  // namespace awe::hj

#endif  // AWE_HJ_SOLVER_HPP_
