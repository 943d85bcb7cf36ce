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

#include "gnphys/state.hpp"

#include <cmath>
#include <stdexcept>

namespace gnphys {

double Quat::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quat Quat::normalized() const {
  const double n = norm();
  if (n < 1e-12) throw std::invalid_argument("Quat: cannot normalize zero quaternion");
  return {w / n, x / n, y / n, z / n};
}

Quat hamilton_product(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quat quat_from_angle_z(double angle) {
  return {std::cos(0.5 * angle), 0.0, 0.0, std::sin(0.5 * angle)};
}

double quat_angle(const Quat& a, const Quat& b) {
  const Quat an = a.normalized();
  const Quat bn = b.normalized();
  double dot = an.w * bn.w + an.x * bn.x + an.y * bn.y + an.z * bn.z;
  dot = std::min(1.0, std::max(-1.0, std::abs(dot)));
  return 2.0 * std::acos(dot);
}

double quaternion_loss(const Quat& q_e, const Quat& q_p) {
  const Quat a = q_e.normalized();
  const Quat b = q_p.normalized();
  const double dot = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
  return 1.0 - dot * dot;
}

SystemState apply_delta(const SystemState& s, const StateDelta& d) {
  if (s.bodies.size() != d.bodies.size()) {
    throw std::invalid_argument("apply_delta: body count mismatch");
  }
  SystemState out = s;
  out.time_index = s.time_index + 1;
  for (std::size_t i = 0; i < s.bodies.size(); ++i) {
    const BodyState& b = s.bodies[i];
    const BodyDelta& bd = d.bodies[i];
    BodyState& o = out.bodies[i];
    for (int k = 0; k < 3; ++k) {
      o.position[k] = b.position[k] + bd.dposition[k];
      o.linear_velocity[k] = b.linear_velocity[k] + bd.dlinear[k];
      o.angular_velocity[k] = b.angular_velocity[k] + bd.dangular[k];
    }
    if (bd.rotation.norm() < 1e-12) {
      throw std::invalid_argument("apply_delta: zero-norm rotation delta for body " +
                                  std::to_string(i));
    }
    o.orientation = hamilton_product(bd.rotation, b.orientation).normalized();
  }
  return out;
}

StateDelta infer_delta(const SystemState& from, const SystemState& to) {
  if (from.bodies.size() != to.bodies.size()) {
    throw std::invalid_argument("infer_delta: body count mismatch");
  }
  StateDelta d;
  d.bodies.resize(from.bodies.size());
  for (std::size_t i = 0; i < from.bodies.size(); ++i) {
    const BodyState& a = from.bodies[i];
    const BodyState& b = to.bodies[i];
    BodyDelta& bd = d.bodies[i];
    for (int k = 0; k < 3; ++k) {
      bd.dposition[k] = b.position[k] - a.position[k];
      bd.dlinear[k] = b.linear_velocity[k] - a.linear_velocity[k];
      bd.dangular[k] = b.angular_velocity[k] - a.angular_velocity[k];
    }
    Quat rot = hamilton_product(b.orientation, a.orientation.conjugate()).normalized();
    if (rot.w < 0.0) rot = {-rot.w, -rot.x, -rot.y, -rot.z};
    bd.rotation = rot;
  }
  return d;
}

std::pair<SystemState, Vec3> recenter(const SystemState& s, bool planar) {
  if (s.bodies.empty()) throw std::invalid_argument("recenter: no bodies");
  Vec3 offset{0.0, 0.0, 0.0};
  for (const BodyState& b : s.bodies) {
    for (int k = 0; k < 3; ++k) offset[k] += b.position[k];
  }
  for (int k = 0; k < 3; ++k) offset[k] /= static_cast<double>(s.bodies.size());
  if (planar) offset[2] = 0.0;
  return {translate(s, {-offset[0], -offset[1], -offset[2]}), offset};
}

SystemState translate(const SystemState& s, const Vec3& offset) {
  SystemState out = s;
  for (BodyState& b : out.bodies) {
    for (int k = 0; k < 3; ++k) b.position[k] += offset[k];
  }
  return out;
}

void body_to_row(const BodyState& b, double* row) {
  row[0] = b.position[0];
  row[1] = b.position[1];
  row[2] = b.position[2];
  row[3] = b.orientation.w;
  row[4] = b.orientation.x;
  row[5] = b.orientation.y;
  row[6] = b.orientation.z;
  row[7] = b.linear_velocity[0];
  row[8] = b.linear_velocity[1];
  row[9] = b.linear_velocity[2];
  row[10] = b.angular_velocity[0];
  row[11] = b.angular_velocity[1];
  row[12] = b.angular_velocity[2];
}

BodyState body_from_row(const double* row) {
  BodyState b;
  b.position = {row[0], row[1], row[2]};
  b.orientation = {row[3], row[4], row[5], row[6]};
  b.linear_velocity = {row[7], row[8], row[9]};
  b.angular_velocity = {row[10], row[11], row[12]};
  return b;
}

Tensor state_to_rows(const SystemState& s) {
  Tensor t({s.num_bodies(), kStateFeatures});
  for (int i = 0; i < s.num_bodies(); ++i) body_to_row(s.bodies[i], t.data() + i * kStateFeatures);
  return t;
}

SystemState state_from_rows(const Tensor& rows, int time_index) {
  if (rows.cols() != kStateFeatures) {
    throw std::invalid_argument("state_from_rows: expected 13 columns, got " +
                                rows.shape_str());
  }
  SystemState s;
  s.time_index = time_index;
  for (int i = 0; i < rows.rows(); ++i) s.bodies.push_back(body_from_row(rows.data() + i * kStateFeatures));
  return s;
}

}  // namespace gnphys
