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

#ifndef AWE_HJ_VALUE_FUNCTION_HPP_
#define AWE_HJ_VALUE_FUNCTION_HPP_

#include <vector>

#include <Eigen/Dense>

#include "awe/hj/grid.hpp"

namespace awe::hj {

struct ValueFunction {
  Grid grid;
  Eigen::VectorXd values;
  double time = 0.0;  // horizon, <= 0
};

struct ControlTable {
  Grid grid;
  Eigen::VectorXd alpha;
  Eigen::VectorXd mu;
};

// Multilinear interpolation; periodic axes wrap, non-periodic axes throw
// std::out_of_range beyond their bounds. Exact node queries reproduce the
// stored value bit-for-bit.
double interpolate(const ValueFunction& v, std::span<const double> x);

struct QueryResult {
  double value = 0.0;
  bool inside = false;  // value <= 0
};
QueryResult brs_query(const ValueFunction& v, std::span<const double> x);

struct CostateResult {
  Eigen::VectorXd q;
  std::vector<bool> one_sided;  // per axis: fell back near a boundary
};

// Central differences of the interpolated field with per-axis step h equal
// to one grid cell; one-sided (flagged) within a cell of non-periodic
// boundaries. Axes with a single node return a zero component.
CostateResult costate_at(const ValueFunction& v, std::span<const double> x);

// Nearest-node control lookup. slack_cells controls how far beyond a
// non-periodic edge queries are clamped before throwing.
struct ControlSample {
  double alpha = 0.0;
  double mu = 0.0;
};
ControlSample nearest_control(const ControlTable& t, std::span<const double> x,
                              double slack_cells = 1.0);

}  // namespace awe::hj

#endif  // AWE_HJ_VALUE_FUNCTION_HPP_
