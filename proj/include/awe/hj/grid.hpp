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

#ifndef AWE_HJ_GRID_HPP_
#define AWE_HJ_GRID_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace awe::hj {

struct Axis {
  int n = 0;
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;

  // Periodic axes exclude the upper edge (node i at lo + i*step, step =
  // (hi-lo)/n); non-periodic axes include both ends.
  double step() const {
    if (periodic) return (hi - lo) / n;
    return n > 1 ? (hi - lo) / (n - 1) : 0.0;
  }
  double coord(int i) const { return lo + i * step(); }
};

// Rectilinear grid of runtime dimension; row-major storage with the last
// axis fastest.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<Axis> axes);

  int ndim() const { return static_cast<int>(axes_.size()); }
  std::size_t size() const { return size_; }
  const Axis& axis(int d) const { return axes_[d]; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t stride(int d) const { return strides_[d]; }

  std::size_t flat(std::span<const int> idx) const;
  void unflat(std::size_t flat, std::span<int> idx) const;
  void coords(std::span<const int> idx, std::span<double> x) const;

  // Cell location along one axis for multilinear interpolation. Exact node
  // hits snap so interpolation reproduces stored values bit-for-bit.
  struct CellLoc {
    int i0 = 0;
    int i1 = 0;
    double frac = 0.0;
  };
  CellLoc locate(int d, double x) const;  // throws std::out_of_range

  // Nearest node index along one axis. `slack_cells` extends the accepted
  // range beyond non-periodic edges (clamped); farther points throw.
  int nearest(int d, double x, double slack_cells = 0.0) const;

  bool operator==(const Grid& other) const;

 private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

}  // namespace awe::hj

#endif  // AWE_HJ_GRID_HPP_
