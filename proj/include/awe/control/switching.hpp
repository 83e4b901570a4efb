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

#ifndef AWE_CONTROL_SWITCHING_HPP_
#define AWE_CONTROL_SWITCHING_HPP_

#include <deque>

#include "awe/hj/value_function.hpp"
#include "awe/safety_model.hpp"

namespace awe {

struct SwitchConfig {
  double f_rupture = 1870.0;   // [N]
  double margin_abs = 30.0;    // [N] immediate engage margin
  double margin_pred = 50.0;   // [N] predicted engage margin
  double margin_release = 40.0;  // [N] release margin
  double horizon = 0.1;        // [s] prediction horizon
  double window = 0.2;         // [s] moving-average window
};

// Time-stamped tether-force samples with a windowed mean and its backward
// difference. Samples must arrive with strictly increasing timestamps.
class ForceHistory {
 public:
  explicit ForceHistory(double window) : window_(window) {}

  void push(double t, double f_norm);
  int size() const { return static_cast<int>(samples_.size()); }
  double latest() const { return samples_.back().f; }

  // Mean of samples within [t_latest - window, t_latest].
  double moving_average() const;
  // Backward difference of successive window means [N/s].
  double average_rate() const;

 private:
  struct Sample {
    double t, f;
  };
  double mean_ending_at(double t_end) const;
  std::deque<Sample> samples_;
  double window_;
};

struct SwitchFlags {
  bool s1 = false;  // engage the safety controller
  bool s2 = false;  // release back to the benchmark controller
};

// Switching laws over the instantaneous force, the averaged force rate, and
// the linear force prediction over the horizon. Throws std::runtime_error
// when fewer than two samples are available.
SwitchFlags switch_eval(const SwitchConfig& cfg, const ForceHistory& history);

enum class ControllerMode { kNdi, kSafety };

// Two-state automaton: NDI -> SAFETY on S1, SAFETY -> NDI on S2, hold
// otherwise. Initial mode is NDI.
ControllerMode automaton_step(ControllerMode mode, bool s1, bool s2);

// Nearest-node control lookup for a safety state. Periodic axes wrap;
// non-periodic axes are clamped up to one cell beyond their edge, farther
// queries throw std::out_of_range.
Control safety_command(const hj::ControlTable& table, const SafetyState& x);

}  // namespace awe

#endif  // AWE_CONTROL_SWITCHING_HPP_
