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

#include "awe/control/switching.hpp"

#include <cmath>
#include <stdexcept>

namespace awe {

void ForceHistory::push(double t, double f_norm) {
  if (!samples_.empty() && t <= samples_.back().t)
    throw std::invalid_argument("force history: non-increasing timestamp");
  samples_.push_back({t, f_norm});
  // Keep enough history for the mean ending one sample earlier.
  const double keep_from = t - 2.0 * window_ - 1e-9;
  while (samples_.size() > 2 && samples_.front().t < keep_from)
    samples_.pop_front();
}

double ForceHistory::mean_ending_at(double t_end) const {
  double acc = 0.0;
  int count = 0;
  for (const Sample& s : samples_) {
    if (s.t > t_end + 1e-12) break;
    if (s.t >= t_end - window_ - 1e-12) {
      acc += s.f;
      ++count;
    }
  }
  if (count == 0) throw std::runtime_error("force history: empty window");
  return acc / count;
}

double ForceHistory::moving_average() const {
  if (samples_.empty()) throw std::runtime_error("force history: no samples");
  return mean_ending_at(samples_.back().t);
}

double ForceHistory::average_rate() const {
  if (samples_.size() < 2)
    throw std::runtime_error("force history: need at least two samples");
  const double t_now = samples_.back().t;
  const double t_prev = samples_[samples_.size() - 2].t;
  const double m_now = mean_ending_at(t_now);
  const double m_prev = mean_ending_at(t_prev);
  return (m_now - m_prev) / (t_now - t_prev);
}

SwitchFlags switch_eval(const SwitchConfig& cfg, const ForceHistory& history) {
  if (history.size() < 2)
    throw std::runtime_error("switch_eval: insufficient history");
  const double f = history.latest();
  const double rate = history.average_rate();
  SwitchFlags out;
  out.s1 = f >= cfg.f_rupture - cfg.margin_abs ||
           f + rate * cfg.horizon >= cfg.f_rupture - cfg.margin_pred;
  out.s2 = !out.s1 &&
           (f <= cfg.f_rupture - cfg.margin_release || rate <= 0.0);
  return out;
}

ControllerMode automaton_step(ControllerMode mode, bool s1, bool s2) {
  if (mode == ControllerMode::kNdi && s1) return ControllerMode::kSafety;
  if (mode == ControllerMode::kSafety && s2) return ControllerMode::kNdi;
  return mode;
}

Control safety_command(const hj::ControlTable& table, const SafetyState& x) {
  const Vector7d v = x.vec();
  const hj::ControlSample s =
      hj::nearest_control(table, std::span<const double>(v.data(), 7),
                          /*slack_cells=*/1.0);
  return Control{s.alpha, s.mu};
}

}  // namespace awe
