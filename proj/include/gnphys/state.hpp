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

#ifndef GNPHYS_STATE_H_
#define GNPHYS_STATE_H_

#include <array>
#include <vector>

#include "gnphys/tensor.hpp"

namespace gnphys {

using Vec3 = std::array<double, 3>;

// Unit quaternion (w, x, y, z) for orientations and rotation deltas.
struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  double norm() const;
  Quat conjugate() const { return {w, -x, -y, -z}; }
  // Throws on (near-)zero norm.
  Quat normalized() const;
};

// Standard quaternion product q1 * q2 (rotation q2 followed by q1).
Quat hamilton_product(const Quat& q1, const Quat& q2);
Quat quat_from_angle_z(double angle);
// Angle of the relative rotation between two unit quaternions, in [0, pi].
double quat_angle(const Quat& a, const Quat& b);

// 1 - (qe . qp)^2 on unit-normalized inputs: zero iff the quaternions agree
// up to sign (double cover). Throws on zero-norm input.
double quaternion_loss(const Quat& q_e, const Quat& q_p);

// Instantaneous 13-feature rigid-body state.
struct BodyState {
  Vec3 position{};
  Quat orientation{};
  Vec3 linear_velocity{};
  Vec3 angular_velocity{};
};

struct SystemState {
  std::vector<BodyState> bodies;
  int time_index = 0;

  int num_bodies() const { return static_cast<int>(bodies.size()); }
};

// Per-body state change: additive for position/velocities, a rotation
// quaternion composed by Hamilton product for orientation.
struct BodyDelta {
  Vec3 dposition{};
  Quat rotation{};
  Vec3 dlinear{};
  Vec3 dangular{};
};

struct StateDelta {
  std::vector<BodyDelta> bodies;
};

// s' with position/velocities added and orientation q' = normalize(dq * q).
// Throws on body count mismatch or zero-norm rotation delta.
SystemState apply_delta(const SystemState& s, const StateDelta& d);

// Delta such that apply_delta(from, infer_delta(from, to)) == to (within
// roundoff). The rotation is sign-canonicalized to w >= 0.
StateDelta infer_delta(const SystemState& from, const SystemState& to);

// Subtracts the mean body position from all bodies and returns the offset
// for inversion. Planar systems re-center the x-y components only.
std::pair<SystemState, Vec3> recenter(const SystemState& s, bool planar = true);
SystemState translate(const SystemState& s, const Vec3& offset);

// 13 features per body: position, quaternion, linear velocity, angular
// velocity — the dynamic graph's node row layout.
constexpr int kStateFeatures = 13;
void body_to_row(const BodyState& b, double* row);
BodyState body_from_row(const double* row);
Tensor state_to_rows(const SystemState& s);
SystemState state_from_rows(const Tensor& rows, int time_index = 0);

}  // namespace gnphys

#endif  // GNPHYS_STATE_H_
