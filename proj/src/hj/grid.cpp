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

#include "awe/hj/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace awe::hj {

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("grid: no axes");
  for (const Axis& a : axes_) {
    if (a.n < 1) throw std::invalid_argument("grid: axis needs >= 1 node");
    if (!(a.hi > a.lo)) throw std::invalid_argument("grid: max must exceed min");
  }
  strides_.assign(axes_.size(), 1);
  for (int d = ndim() - 2; d >= 0; --d)
    strides_[d] = strides_[d + 1] * axes_[d + 1].n;
  size_ = strides_[0] * axes_[0].n;
}

std::size_t Grid::flat(std::span<const int> idx) const {
  std::size_t f = 0;
  for (int d = 0; d < ndim(); ++d) f += strides_[d] * idx[d];
  return f;
}

void Grid::unflat(std::size_t flat, std::span<int> idx) const {
  for (int d = 0; d < ndim(); ++d) {
    idx[d] = static_cast<int>(flat / strides_[d]);
    flat %= strides_[d];
  }
}

void Grid::coords(std::span<const int> idx, std::span<double> x) const {
  for (int d = 0; d < ndim(); ++d) x[d] = axes_[d].coord(idx[d]);
}

Grid::CellLoc Grid::locate(int d, double x) const {
  const Axis& ax = axes_[d];
  CellLoc loc;
  if (ax.n == 1) return loc;
  const double step = ax.step();
  if (ax.periodic) {
    double u = (x - ax.lo) / step;
    double fu = std::floor(u);
    double frac = u - fu;
    long i = static_cast<long>(fu) % ax.n;
    if (i < 0) i += ax.n;
    if (frac < 1e-9) frac = 0.0;
    if (frac > 1.0 - 1e-9) {
      frac = 0.0;
      i = (i + 1) % ax.n;
    }
    loc.i0 = static_cast<int>(i);
    loc.i1 = (loc.i0 + 1) % ax.n;
    loc.frac = frac;
    return loc;
  }
  double u = (x - ax.lo) / step;
  const double tol = 1e-9 * ax.n;
  if (u < -tol || u > ax.n - 1 + tol)
    throw std::out_of_range("grid: query outside non-periodic axis");
  u = std::clamp(u, 0.0, static_cast<double>(ax.n - 1));
  int i = std::min(static_cast<int>(std::floor(u)), ax.n - 2);
  double frac = u - i;
  if (frac < 1e-9) frac = 0.0;
  if (frac > 1.0 - 1e-9) {
    frac = 0.0;
    ++i;
    if (i == ax.n - 1) {
      loc.i0 = i;
      loc.i1 = i;
      loc.frac = 0.0;
      return loc;
    }
  }
  loc.i0 = i;
  loc.i1 = std::min(i + 1, ax.n - 1);
  loc.frac = frac;
  return loc;
}

int Grid::nearest(int d, double x, double slack_cells) const {
  const Axis& ax = axes_[d];
  if (ax.n == 1) return 0;
  const double step = ax.step();
  if (ax.periodic) {
    long i = std::lround((x - ax.lo) / step) % ax.n;
    if (i < 0) i += ax.n;
    return static_cast<int>(i);
  }
  const double u = (x - ax.lo) / step;
  if (u < -slack_cells - 1e-9 || u > ax.n - 1 + slack_cells + 1e-9)
    throw std::out_of_range("grid: query outside axis envelope");
  return std::clamp(static_cast<int>(std::lround(u)), 0, ax.n - 1);
}

bool Grid::operator==(const Grid& other) const {
  if (ndim() != other.ndim()) return false;
  for (int d = 0; d < ndim(); ++d) {
    const Axis& a = axes_[d];
    const Axis& b = other.axes_[d];
    if (a.n != b.n || a.lo != b.lo || a.hi != b.hi ||
        a.periodic != b.periodic)
      return false;
  }
  return true;
}

}  // namespace awe::hj
