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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "awe/hj/solver.hpp"
#include "awe/hj/table_io.hpp"

using namespace awe;
using namespace awe::hj;

namespace {

// 1D constant advection x_dot = -1, reach set |x| <= 1, no avoid set.
class AdvectionToy : public NodeDynamics {
 public:
  AdvectionToy() {
    std::vector<Axis> axes(1);
    axes[0] = {601, -3.0, 3.0, false};
    grid_ = Grid(axes);
  }
  const Grid& grid() const override { return grid_; }
  double hamiltonian(std::size_t, const double* q) const override {
    return -q[0];
  }
  void speed_bounds(std::size_t, double* out) const override { out[0] = 1.0; }
  double h_at(std::size_t) const override { return -10.0; }
  double l_at(std::size_t node) const override {
    return std::abs(grid_.axis(0).coord(static_cast<int>(node))) - 1.0;
  }

 private:
  Grid grid_;
};

ValueFunction make_linear_field() {
  std::vector<Axis> axes(3);
  axes[0] = {9, -1.0, 1.0, false};
  axes[1] = {7, 0.0, 2.0 * M_PI, true};
  axes[2] = {5, 2.0, 4.0, false};
  ValueFunction v;
  v.grid = Grid(axes);
  v.values.resize(static_cast<Eigen::Index>(v.grid.size()));
  return v;
}

}  // namespace

TEST_CASE("grid flat/unflat round trip and strides") {
  std::vector<Axis> axes(3);
  axes[0] = {4, 0.0, 1.0, false};
  axes[1] = {5, -1.0, 1.0, true};
  axes[2] = {3, 0.0, 2.0, false};
  const Grid g(axes);
  CHECK(g.size() == 60);
  CHECK(g.stride(2) == 1);
  CHECK(g.stride(1) == 3);
  CHECK(g.stride(0) == 15);
  int idx[3];
  for (std::size_t f = 0; f < g.size(); ++f) {
    g.unflat(f, idx);
    CHECK(g.flat(std::span<const int>(idx, 3)) == f);
  }
}

TEST_CASE("interpolation: node exactness, midpoints, wrap, bounds") {
  ValueFunction v = make_linear_field();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index i = 0; i < v.values.size(); ++i) v.values[i] = u(rng);

  // Node queries reproduce stored values bit for bit.
  int idx[3];
  double x[3];
  for (std::size_t f = 0; f < v.grid.size(); f += 7) {
    v.grid.unflat(f, idx);
    v.grid.coords(idx, x);
    CHECK(interpolate(v, x) == v.values[f]);
  }

  // Midpoint along one axis is the arithmetic mean.
  v.grid.unflat(11, idx);
  v.grid.coords(idx, x);
  const double step2 = v.grid.axis(2).step();
  if (idx[2] + 1 < v.grid.axis(2).n) {
    const double mid = interpolate(
        v, std::array<double, 3>{x[0], x[1], x[2] + 0.5 * step2});
    CHECK(mid == doctest::Approx(0.5 * (v.values[11] + v.values[12]))
                     .epsilon(1e-15));
  }

  // Periodic wrap: query beyond the seam equals the wrapped query.
  const double a = interpolate(v, std::array<double, 3>{0.0, 0.1, 3.0});
  const double b = interpolate(
      v, std::array<double, 3>{0.0, 0.1 + 2.0 * M_PI, 3.0});
  CHECK(a == doctest::Approx(b).epsilon(1e-12));

  // Out of bounds on a non-periodic axis.
  CHECK_THROWS_AS(
      interpolate(v, std::array<double, 3>{1.5, 0.0, 3.0}),
      std::out_of_range);
}

TEST_CASE("interpolated field is Lipschitz along random segments") {
  ValueFunction v = make_linear_field();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Eigen::Index i = 0; i < v.values.size(); ++i) v.values[i] = u(rng);

  // Bound: sum over axes of (max node difference along that axis) / step.
  double lip = 0.0;
  for (int d = 0; d < 3; ++d) {
    double dmax = 0.0;
    int idx[3];
    for (std::size_t f = 0; f < v.grid.size(); ++f) {
      v.grid.unflat(f, idx);
      if (idx[d] + 1 < v.grid.axis(d).n) {
        dmax = std::max(dmax, std::abs(v.values[f + v.grid.stride(d)] -
                                       v.values[f]));
      } else if (v.grid.axis(d).periodic) {
        dmax = std::max(
            dmax,
            std::abs(v.values[f - (v.grid.axis(d).n - 1) * v.grid.stride(d)] -
                     v.values[f]));
      }
    }
    lip += dmax / v.grid.axis(d).step();
  }
  for (int trial = 0; trial < 500; ++trial) {
    const std::array<double, 3> p{-1.0 + 2.0 * u(rng), 6.28 * u(rng),
                                  2.0 + 2.0 * u(rng)};
    std::array<double, 3> q = p;
    const int d = static_cast<int>(3.0 * u(rng)) % 3;
    const double dx = (u(rng) - 0.5) * 0.3;
    q[d] = std::clamp(q[d] + dx, d == 1 ? -1e9 : v.grid.axis(d).lo,
                      d == 1 ? 1e9 : v.grid.axis(d).hi);
    const double dv = std::abs(interpolate(v, p) - interpolate(v, q));
    CHECK(dv <= lip * std::abs(p[d] - q[d]) + 1e-12);
  }
}

TEST_CASE("costate: exact on linear fields, one-sided flags, wrap") {
  ValueFunction v = make_linear_field();
  // V = a . x with a periodic-safe zero coefficient on the wrapped axis.
  const Eigen::Vector3d a(0.7, 0.0, -1.3);
  int idx[3];
  double x[3];
  for (std::size_t f = 0; f < v.grid.size(); ++f) {
    v.grid.unflat(f, idx);
    v.grid.coords(idx, x);
    v.values[f] = a[0] * x[0] + a[1] * x[1] + a[2] * x[2];
  }
  const std::array<double, 3> interior{0.1, 1.0, 3.0};
  const CostateResult c = costate_at(v, interior);
  CHECK(c.q[0] == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(c.q[1] == doctest::Approx(0.0));
  CHECK(c.q[2] == doctest::Approx(-1.3).epsilon(1e-9));
  CHECK(!c.one_sided[0]);

  // Near the boundary the difference falls back one-sided and flags it.
  const std::array<double, 3> edge{-1.0, 1.0, 3.0};
  const CostateResult ce = costate_at(v, edge);
  CHECK(ce.one_sided[0]);
  CHECK(ce.q[0] == doctest::Approx(0.7).epsilon(1e-9));

  // Quadratic refinement: second-order error in the step.
  ValueFunction v2 = make_linear_field();
  for (std::size_t f = 0; f < v2.grid.size(); ++f) {
    v2.grid.unflat(f, idx);
    v2.grid.coords(idx, x);
    v2.values[f] = x[0] * x[0] + 0.3 * x[2] * x[2];
  }
  const CostateResult q2 = costate_at(v2, interior);
  // Central differences are exact for quadratics at nodes; off-node they
  // carry O(step) interpolation error, so just require closeness.
  CHECK(q2.q[0] == doctest::Approx(2.0 * interior[0]).epsilon(0.3));
}

TEST_CASE("costate is continuous across the periodic seam") {
  ValueFunction v = make_linear_field();
  int idx[3];
  double x[3];
  for (std::size_t f = 0; f < v.grid.size(); ++f) {
    v.grid.unflat(f, idx);
    v.grid.coords(idx, x);
    v.values[f] = std::sin(x[1]) + x[0];
  }
  const double eps = 1e-6;
  const CostateResult below =
      costate_at(v, std::array<double, 3>{0.0, 2.0 * M_PI - eps, 3.0});
  const CostateResult above =
      costate_at(v, std::array<double, 3>{0.0, eps, 3.0});
  CHECK(below.q[1] == doctest::Approx(above.q[1]).epsilon(1e-4));
}

TEST_CASE("table io: bit-exact round trip, corruption, size formula") {
  ValueFunction v = make_linear_field();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (Eigen::Index i = 0; i < v.values.size(); ++i) v.values[i] = u(rng);
  v.time = -0.1;

  const std::string path = "/tmp/awe_test_value.bin";
  save_value_function(path, v);
  const ValueFunction w = load_value_function(path);
  CHECK(w.grid == v.grid);
  CHECK(w.values == v.values);

  // Exact size: header + payload + checksum.
  std::FILE* f = std::fopen(path.c_str(), "rb");
  std::fseek(f, 0, SEEK_END);
  const long size = std::ftell(f);
  std::fclose(f);
  CHECK(static_cast<std::size_t>(size) == table_file_size(v.grid, 1));

  // Corrupt one header byte: the loader must reject, not partially load.
  {
    std::FILE* fh = std::fopen(path.c_str(), "r+b");
    std::fseek(fh, 3, SEEK_SET);
    std::fputc('X', fh);
    std::fclose(fh);
    CHECK_THROWS_AS(load_value_function(path), std::runtime_error);
  }
  // Corrupt one payload byte: checksum failure.
  save_value_function(path, v);
  {
    std::FILE* fh = std::fopen(path.c_str(), "r+b");
    std::fseek(fh, -12, SEEK_END);
    std::fputc(0x5A, fh);
    std::fclose(fh);
    CHECK_THROWS_AS(load_value_function(path), std::runtime_error);
  }

  // Control table round trip.
  ControlTable t;
  t.grid = v.grid;
  t.alpha.resize(v.values.size());
  t.mu.resize(v.values.size());
  for (Eigen::Index i = 0; i < v.values.size(); ++i) {
    t.alpha[i] = u(rng);
    t.mu[i] = u(rng);
  }
  const std::string cpath = "/tmp/awe_test_control.bin";
  save_control_table(cpath, t);
  const ControlTable t2 = load_control_table(cpath);
  CHECK(t2.alpha == t.alpha);
  CHECK(t2.mu == t.mu);
  // Wrong magic for the loader type.
  CHECK_THROWS_AS(load_value_function(cpath), std::runtime_error);
}

TEST_CASE("advection toy: zero-level set translates at unit speed") {
  AdvectionToy toy;
  SolveOptions opts;
  opts.cfl = 0.5;
  opts.dt_max = 0.05;
  const SolveResult res = solve_brs(toy, 0.5, opts);

  // Terminal |x| <= 1 translated right by 0.5: zero set ~ [-0.5, 1.5].
  const Grid& g = toy.grid();
  const double dx = g.axis(0).step();
  double lo = 10.0, hi = -10.0;
  for (int i = 0; i < g.axis(0).n; ++i) {
    if (res.value.values[i] <= 0.0) {
      lo = std::min(lo, g.axis(0).coord(i));
      hi = std::max(hi, g.axis(0).coord(i));
    }
  }
  CHECK(std::abs(lo - (-0.5)) <= dx + 1e-9);
  CHECK(std::abs(hi - 1.5) <= dx + 1e-9);
}

TEST_CASE("qvi step: frozen plant is identity, projection holds, CFL guard") {
  // H == 0 dynamics: only the projection acts.
  class Frozen : public NodeDynamics {
   public:
    Frozen() {
      std::vector<Axis> axes(1);
      axes[0] = {21, 0.0, 1.0, false};
      grid_ = Grid(axes);
    }
    const Grid& grid() const override { return grid_; }
    double hamiltonian(std::size_t, const double*) const override {
      return 0.0;
    }
    void speed_bounds(std::size_t, double* out) const override {
      out[0] = 0.0;
    }
    double h_at(std::size_t node) const override {
      return node == 10 ? 0.25 : -1.0;
    }
    double l_at(std::size_t node) const override {
      return -0.5 + 0.01 * static_cast<double>(node);
    }
   private:
    Grid grid_;
  } frozen;

  const StepBounds bounds = lf_bounds(frozen, 0.5, 0.01);
  CHECK(bounds.alpha[0] == 0.0);
  CHECK(bounds.dt == 0.01);  // capped at dt_max for a frozen plant

  ValueFunction v = terminal_value(frozen);
  Eigen::VectorXd h(v.values.size());
  for (int i = 0; i < h.size(); ++i) h[i] = frozen.h_at(i);

  // V already >= h: one step leaves it bit-identical.
  const Eigen::VectorXd before = v.values;
  qvi_step(v, h, frozen, bounds, 0.01);
  CHECK(v.values == before);
  for (int i = 0; i < h.size(); ++i) CHECK(v.values[i] >= h[i]);

  CHECK_THROWS_AS(qvi_step(v, h, frozen, bounds, 1.0),
                  std::invalid_argument);
}

TEST_CASE("safety node dynamics agree with the public model") {
  SafetyModelParams params;
  SafetyModel model(params);
  std::vector<Axis> axes(7);
  axes[0] = {9, 0.0, 2.0 * M_PI, true};
  axes[1] = {5, -25.0, 25.0, false};
  axes[2] = {3, 230.0, 280.0, false};
  axes[3] = {4, 22.0, 40.0, false};
  axes[4] = {7, -M_PI, M_PI, true};
  axes[5] = {5, -1.0, 1.0, false};
  axes[6] = {3, -0.001, 0.009, false};
  const Grid grid(axes);
  SafetyNodeDynamics dyn(model, grid);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t node =
        static_cast<std::size_t>((rng() % grid.size()));
    const SafetyState x = dyn.state_at(node);

    Vector7d q;
    for (int i = 0; i < 7; ++i) q[i] = u(rng);
    q[6] *= 300.0;

    const double h_node = dyn.h_at(node);
    const double h_model = model.h_fn(x);
    CHECK(h_node == doctest::Approx(h_model).epsilon(1e-10));

    const double l_node = dyn.l_at(node);
    const double l_model = model.l_fn(x);
    CHECK(l_node == doctest::Approx(l_model).epsilon(1e-10));

    const double ham_node = dyn.hamiltonian(node, q.data());
    const double ham_model = model.hamiltonian(x, q);
    CHECK(std::abs(ham_node - ham_model) <=
          1e-9 * std::max(1.0, std::abs(ham_model)));

    double alpha, mu;
    dyn.optimal_control_at(node, q.data(), &alpha, &mu);
    const Control uc = model.optimal_control(x, q);
    CHECK(alpha == uc.alpha_a);
    CHECK(mu == uc.mu_a);

    double sb[7];
    dyn.speed_bounds(node, sb);
    const Vector7d sb_model = model.speed_bounds(x);
    for (int k = 0; k < 7; ++k)
      CHECK(sb[k] == doctest::Approx(sb_model[k]).epsilon(1e-9));
  }
}

TEST_CASE("terminal value equals max(h, l) and stays finite") {
  SafetyModelParams params;
  SafetyModel model(params);
  std::vector<Axis> axes(7);
  axes[0] = {7, 0.0, 2.0 * M_PI, true};
  axes[1] = {3, -20.0, 20.0, false};
  axes[2] = {3, 240.0, 260.0, false};
  axes[3] = {3, 25.0, 38.0, false};
  axes[4] = {5, -M_PI, M_PI, true};
  axes[5] = {3, -0.9, 0.9, false};
  axes[6] = {3, 0.0, 0.009, false};
  const Grid grid(axes);
  SafetyNodeDynamics dyn(model, grid);
  const ValueFunction v0 = terminal_value(dyn);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::isfinite(v0.values[i]));
    CHECK(v0.values[i] ==
          doctest::Approx(std::max(dyn.h_at(i), dyn.l_at(i))));
  }
}

TEST_CASE("small 7D solve: projection invariant and control consistency") {
  SafetyModelParams params;
  SafetyModel model(params);
  std::vector<Axis> axes(7);
  axes[0] = {7, 0.0, 2.0 * M_PI, true};
  axes[1] = {3, -20.0, 20.0, false};
  axes[2] = {3, 240.0, 260.0, false};
  axes[3] = {3, 25.0, 38.0, false};
  axes[4] = {5, -M_PI, M_PI, true};
  axes[5] = {3, -0.9, 0.9, false};
  axes[6] = {3, 0.0, 0.009, false};
  const Grid grid(axes);
  SafetyNodeDynamics dyn(model, grid);

  int steps_seen = 0;
  SolveOptions opts;
  opts.observer = [&](int, const ValueFunction& v) {
    ++steps_seen;
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(v.values[i] >= dyn.h_at(i));
  };
  const SolveResult res = solve_brs(dyn, 0.05, opts);
  CHECK(steps_seen == res.steps);
  CHECK(res.value.time == doctest::Approx(-0.05));

  // Monotone property V(x, -T) >= h(x).
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(res.value.values[i] >= dyn.h_at(i));

  // Stored controls equal optimal_control at the costate of the final V.
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const std::size_t node = rng() % grid.size();
    int idx[7];
    double x[7];
    grid.unflat(node, idx);
    grid.coords(idx, x);
    const CostateResult c = costate_at(res.value, x);
    const Control u =
        model.optimal_control(dyn.state_at(node), Vector7d(c.q));
    CHECK(res.controls.alpha[node] == u.alpha_a);
    CHECK(res.controls.mu[node] == u.mu_a);
  }

  // brs_query at nodes returns stored values; nearest_control matches.
  for (int t = 0; t < 20; ++t) {
    const std::size_t node = rng() % grid.size();
    int idx[7];
    double x[7];
    grid.unflat(node, idx);
    grid.coords(idx, x);
    CHECK(brs_query(res.value, x).value == res.value.values[node]);
    const ControlSample cs = nearest_control(res.controls, x);
    CHECK(cs.alpha == res.controls.alpha[node]);
  }
}

TEST_CASE("disabling the disturbance cannot raise the value function") {
  SafetyModelParams params;
  SafetyModel model(params);
  std::vector<Axis> axes(7);
  axes[0] = {5, 0.0, 2.0 * M_PI, true};
  axes[1] = {3, -20.0, 20.0, false};
  axes[2] = {3, 240.0, 260.0, false};
  axes[3] = {3, 25.0, 38.0, false};
  axes[4] = {5, -M_PI, M_PI, true};
  axes[5] = {3, -0.9, 0.9, false};
  axes[6] = {3, 0.0, 0.009, false};
  const Grid grid(axes);
  SafetyNodeDynamics dyn(model, grid);
  SafetyNodeDynamics dyn0(model, grid);
  dyn0.set_zero_disturbance(true);

  // Identical dissipation and step for a clean pointwise comparison.
  SolveOptions opts;
  opts.fixed_bounds = lf_bounds(dyn, 0.5, 0.05);
  const SolveResult with_d = solve_brs(dyn, 0.05, opts);
  const SolveResult without_d = solve_brs(dyn0, 0.05, opts);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(without_d.value.values[i] <=
          with_d.value.values[i] + 1e-9);
}

TEST_CASE("nearest-node lookup wraps, clamps one cell, then throws") {
  ControlTable t;
  std::vector<Axis> axes(2);
  axes[0] = {8, 0.0, 2.0 * M_PI, true};
  axes[1] = {5, -1.0, 1.0, false};
  t.grid = Grid(axes);
  t.alpha.resize(40);
  t.mu.resize(40);
  for (int i = 0; i < 40; ++i) {
    t.alpha[i] = i;
    t.mu[i] = -i;
  }
  // Wrap on the periodic axis.
  const ControlSample a =
      nearest_control(t, std::array<double, 2>{2.0 * M_PI + 0.01, 0.0});
  const ControlSample b = nearest_control(t, std::array<double, 2>{0.01, 0.0});
  CHECK(a.alpha == b.alpha);
  // One cell beyond the edge clamps.
  CHECK_NOTHROW(nearest_control(t, std::array<double, 2>{0.0, 1.4}));
  // Farther throws.
  CHECK_THROWS_AS(nearest_control(t, std::array<double, 2>{0.0, 2.0}),
                  std::out_of_range);
}
