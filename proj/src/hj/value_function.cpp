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

#include "awe/hj/value_function.hpp"

#include <cmath>
#include <stdexcept>

namespace awe::hj {

double interpolate(const ValueFunction& v, std::span<const double> x) {
  const Grid& g = v.grid;
  const int nd = g.ndim();
  if (static_cast<int>(x.size()) != nd)
    throw std::invalid_argument("interpolate: dimension mismatch");
  if (nd > 20) throw std::invalid_argument("interpolate: too many axes");

  Grid::CellLoc loc[20];
  for (int d = 0; d < nd; ++d) loc[d] = g.locate(d, x[d]);

  double acc = 0.0;
  const unsigned corners = 1u << nd;
  for (unsigned c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = 0;
    for (int d = 0; d < nd; ++d) {
      const bool hi = (c >> d) & 1u;
      w *= hi ? loc[d].frac : 1.0 - loc[d].frac;
      if (w == 0.0) break;
      flat += g.stride(d) * (hi ? loc[d].i1 : loc[d].i0);
    }
    if (w != 0.0) acc += w * v.values[flat];
  }
  return acc;
}

QueryResult brs_query(const ValueFunction& v, std::span<const double> x) {
  QueryResult out;
  out.value = interpolate(v, x);
  out.inside = out.value <= 0.0;
  return out;
}

CostateResult costate_at(const ValueFunction& v, std::span<const double> x) {
  const Grid& g = v.grid;
  const int nd = g.ndim();
  CostateResult out;
  out.q.resize(nd);
  out.one_sided.assign(nd, false);

  std::vector<double> probe(x.begin(), x.end());
  for (int d = 0; d < nd; ++d) {
    const Axis& ax = g.axis(d);
    if (ax.n == 1) {
      out.q[d] = 0.0;
      continue;
    }
    const double h = ax.step();
    const bool can_minus = ax.periodic || x[d] - h >= ax.lo - 1e-9 * h;
    const bool can_plus = ax.periodic || x[d] + h <= ax.hi + 1e-9 * h;
    double vm = 0.0, vp = 0.0;
    if (can_minus) {
      probe[d] = x[d] - h;
      vm = interpolate(v, probe);
    }
    if (can_plus) {
      probe[d] = x[d] + h;
      vp = interpolate(v, probe);
    }
    probe[d] = x[d];
    if (can_minus && can_plus) {
      out.q[d] = (vp - vm) / (2.0 * h);
    } else if (can_plus) {
      out.q[d] = (vp - interpolate(v, probe)) / h;
      out.one_sided[d] = true;
    } else if (can_minus) {
      out.q[d] = (interpolate(v, probe) - vm) / h;
      out.one_sided[d] = true;
    } else {
      throw std::out_of_range("costate_at: axis narrower than one cell");
    }
  }
  return out;
}

ControlSample nearest_control(const ControlTable& t, std::span<const double> x,
                              double slack_cells) {
  const Grid& g = t.grid;
  const int nd = g.ndim();
  if (static_cast<int>(x.size()) != nd)
    throw std::invalid_argument("nearest_control: dimension mismatch");
  std::size_t flat = 0;
  for (int d = 0; d < nd; ++d)
    flat += g.stride(d) * g.nearest(d, x[d], slack_cells);
  return ControlSample{t.alpha[flat], t.mu[flat]};
}

}  // namespace awe::hj
