// Copyright 2026 The ArmTeleop Authors
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

#ifndef ARMTELEOP_KINEMATICS_HPP_
#define ARMTELEOP_KINEMATICS_HPP_

#include <cstdint>

#include "teleop/math.hpp"

namespace teleop {

/// Two-segment arm: upper arm (shoulder->elbow) and forearm (elbow->wrist).
/// Both segments extend along the local +x axis of their frame, so the
/// fixed offsets are [upper_m, 0, 0] and [forearm_m, 0, 0].
struct ArmModel {
  double upper_m = 0.30;
  double forearm_m = 0.25;

  ArmModel() = default;
  ArmModel(double upper, double forearm);

  double reach() const { return upper_m + forearm_m; }
};

/// One synchronized reading from the two armbands: orientation of the
/// upper-arm and forearm frames w.r.t. the shared inertial/shoulder frame.
struct ImuSample {
  std::uint64_t t_us = 0;
  Quaternion q_upper;
  Quaternion q_forearm;
};

/// Master-side pose delta between consecutive IMU samples:
/// dp is the wrist translation, dq the relative forearm rotation.
struct PoseIncrement {
  std::uint64_t t_us = 0;
  Vec3 dp;
  Quaternion dq;
};

/// Wrist position in the shoulder frame:
///   p = R(q_upper) * [upper, 0, 0] + R(q_forearm) * [forearm, 0, 0].
Vec3 wrist_position(const ArmModel& arm, const ImuSample& sample);

/// Delta from the previous to the current master pose:
///   dp = p_curr - p_prev,  dq = q_curr (x) q_prev^-1.
PoseIncrement pose_increment(const Vec3& p_prev, const Quaternion& q_prev,
                             const Vec3& p_curr, const Quaternion& q_curr,
                             std::uint64_t t_us);

}  // namespace teleop

#endif  // ARMTELEOP_KINEMATICS_HPP_
