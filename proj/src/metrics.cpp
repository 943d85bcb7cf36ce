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

#include "gnphys/metrics.hpp"

#include <limits>
#include <stdexcept>

namespace gnphys {

GroupErrors& GroupErrors::operator+=(const GroupErrors& o) {
  position += o.position;
  orientation += o.orientation;
  linear_velocity += o.linear_velocity;
  angular_velocity += o.angular_velocity;
  return *this;
}

GroupErrors GroupErrors::operator/(double d) const {
  return {position / d, orientation / d, linear_velocity / d, angular_velocity / d};
}

GroupErrors state_sq_error(const SystemState& a, const SystemState& b) {
  if (a.bodies.size() != b.bodies.size()) {
    throw std::invalid_argument("state_sq_error: body count mismatch");
  }
  GroupErrors e;
  for (std::size_t i = 0; i < a.bodies.size(); ++i) {
    const BodyState& x = a.bodies[i];
    const BodyState& y = b.bodies[i];
    for (int k = 0; k < 3; ++k) {
      const double dp = x.position[k] - y.position[k];
      const double dv = x.linear_velocity[k] - y.linear_velocity[k];
      const double dw = x.angular_velocity[k] - y.angular_velocity[k];
      e.position += dp * dp;
      e.linear_velocity += dv * dv;
      e.angular_velocity += dw * dw;
    }
    e.orientation += quaternion_loss(x.orientation, y.orientation);
  }
  const double n = static_cast<double>(a.bodies.size());
  return e / n;
}

Trajectory constant_baseline(const SystemState& initial, int horizon) {
  if (horizon < 1) throw std::invalid_argument("constant_baseline: horizon must be >= 1");
  Trajectory t;
  t.reserve(horizon);
  for (int i = 0; i < horizon; ++i) t.push_back(initial);
  return t;
}

namespace {

double safe_ratio(double err, double base, bool& degenerate) {
  if (base <= 0.0) {
    degenerate = true;
    return err <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return err / base;
}

}  // namespace

ErrorRatios error_ratios(const Trajectory& pred, const Trajectory& truth,
                         const Trajectory& baseline) {
  if (pred.size() != truth.size() || baseline.size() != truth.size()) {
    throw std::invalid_argument("error_ratios: trajectory length mismatch");
  }
  if (truth.size() < 2) {
    throw std::invalid_argument("error_ratios: need at least 2 states");
  }
  GroupErrors pe, be;
  for (std::size_t t = 1; t < truth.size(); ++t) {
    pe += state_sq_error(pred[t], truth[t]);
    be += state_sq_error(baseline[t], truth[t]);
  }
  const double steps = static_cast<double>(truth.size() - 1);
  pe = pe / steps;
  be = be / steps;

  ErrorRatios out;
  out.ratios.position = safe_ratio(pe.position, be.position, out.degenerate);
  out.ratios.orientation = safe_ratio(pe.orientation, be.orientation, out.degenerate);
  out.ratios.linear_velocity =
      safe_ratio(pe.linear_velocity, be.linear_velocity, out.degenerate);
  out.ratios.angular_velocity =
      safe_ratio(pe.angular_velocity, be.angular_velocity, out.degenerate);
  out.average = (out.ratios.position + out.ratios.orientation +
                 out.ratios.linear_velocity + out.ratios.angular_velocity) /
                4.0;
  return out;
}

ErrorRatios error_metrics(const Trajectory& pred, const Trajectory& truth) {
  if (truth.empty()) throw std::invalid_argument("error_metrics: empty trajectory");
  return error_ratios(pred, truth,
                      constant_baseline(truth[0], static_cast<int>(truth.size())));
}

ErrorRatios one_step_error_metrics(const Trajectory& pred, const Trajectory& truth) {
  if (truth.size() < 2) {
    throw std::invalid_argument("one_step_error_metrics: need at least 2 states");
  }
  Trajectory baseline;
  baseline.push_back(truth[0]);
  for (std::size_t t = 1; t < truth.size(); ++t) baseline.push_back(truth[t - 1]);
  return error_ratios(pred, truth, baseline);
}

}  // namespace gnphys
