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

#include "teleop/kinematics.hpp"

namespace teleop {

ArmModel::ArmModel(double upper, double forearm)
    : upper_m(upper), forearm_m(forearm) {
  if (!(upper > 0.0) || !(forearm > 0.0)) {
    throw Error("arm segment lengths must be positive");
  }
}

Vec3 wrist_position(const ArmModel& arm, const ImuSample& sample) {
  const Mat3 r_upper = quat_to_rotmat(sample.q_upper);
  const Mat3 r_forearm = quat_to_rotmat(sample.q_forearm);
  return r_upper * Vec3{arm.upper_m, 0.0, 0.0} +
         r_forearm * Vec3{arm.forearm_m, 0.0, 0.0};
}

PoseIncrement pose_increment(const Vec3& p_prev, const Quaternion& q_prev,
                             const Vec3& p_curr, const Quaternion& q_curr,
                             std::uint64_t t_us) {
  PoseIncrement inc;
  inc.t_us = t_us;
  inc.dp = p_curr - p_prev;
  inc.dq = quat_mul(q_curr, quat_inverse(q_prev));
  return inc;
}

}  // namespace teleop
