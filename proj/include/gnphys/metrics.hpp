// Copyright 2026 The gnphys Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GNPHYS_METRICS_H_
#define GNPHYS_METRICS_H_

#include <vector>

#include "gnphys/state.hpp"

namespace gnphys {

using Trajectory = std::vector<SystemState>;

// Squared errors per dynamic-state group, averaged over bodies (and steps
// where applicable). Orientation uses the quaternion loss.
struct GroupErrors {
  double position = 0.0;
  double orientation = 0.0;
  double linear_velocity = 0.0;
  double angular_velocity = 0.0;

  GroupErrors& operator+=(const GroupErrors& o);
  GroupErrors operator/(double d) const;
};

GroupErrors state_sq_error(const SystemState& a, const SystemState& b);

// Per-group error ratios against a baseline trajectory, plus their equal-
// weight average. `degenerate` marks groups whose baseline error was zero.
struct ErrorRatios {
  GroupErrors ratios;
  double average = 0.0;
  bool degenerate = false;
};

// The trivial predictor: every step copies the initial state.
Trajectory constant_baseline(const SystemState& initial, int horizon);

// Mean squared per-group error of `pred` against `truth` over steps
// 1..end, each group divided by the same error of `baseline`.
ErrorRatios error_ratios(const Trajectory& pred, const Trajectory& truth,
                         const Trajectory& baseline);

// Rollout-style metric: baseline is the constant prediction at truth[0].
ErrorRatios error_metrics(const Trajectory& pred, const Trajectory& truth);

// One-step-style metric: pred[t] was predicted from truth[t-1], so the
// baseline prediction for step t is truth[t-1] itself.
ErrorRatios one_step_error_metrics(const Trajectory& pred, const Trajectory& truth);

}  // namespace gnphys

#endif  // GNPHYS_METRICS_H_
