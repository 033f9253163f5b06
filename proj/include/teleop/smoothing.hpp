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

#ifndef ARMTELEOP_SMOOTHING_HPP_
#define ARMTELEOP_SMOOTHING_HPP_

#include <cstddef>
#include <deque>
#include <span>

#include "teleop/kinematics.hpp"
#include "teleop/math.hpp"

namespace teleop {

struct SmootherConfig {
  std::size_t window = 10;

  SmootherConfig() = default;
  explicit SmootherConfig(std::size_t n);
};

/// Commanded slave pose: end-effector position and orientation.
struct RobotPose {
  Vec3 p;
  Quaternion q;
};

/// Component-wise arithmetic mean of the position increments in the window.
Vec3 avg_position(std::span<const Vec3> window);

/// Chordal mean of the window quaternions.
///
/// The representatives are sign-aligned to the first window element (the
/// double cover would otherwise corrupt the mean), stacked into a 4xN matrix
/// M and averaged via the principal singular direction of M, computed as the
/// leading eigenvector of the 4x4 symmetric matrix M*M^T. The result is
/// normalized and sign-fixed so its dot with the newest window element is
/// nonnegative.
///
/// When the top two singular values are closer than 1e-12 the principal
/// direction is ambiguous; the function falls back to the normalized
/// sign-aligned arithmetic mean and sets *degenerate.
Quaternion avg_quaternion(std::span<const Quaternion> window,
                          bool* degenerate = nullptr);

/// One integration step of the slave target pose:
///   p <- p + dp_avg,  q <- dq_avg (x) q  (renormalized).
RobotPose apply_pose_update(const RobotPose& pose, const Vec3& dp_avg,
                            const Quaternion& dq_avg);

/// Sliding window over pose increments. Before the window fills, averages
/// run over however many increments have been seen (warm-up), so the first
/// outputs are usable immediately instead of stalling for N cycles.
class IncrementSmoother {
 public:
  explicit IncrementSmoother(SmootherConfig config = {});

  void push(const Vec3& dp, const Quaternion& dq);
  void reset();

  std::size_t size() const { return dp_.size(); }
  std::size_t capacity() const { return config_.window; }

  /// Averages over the current window contents. Throw EmptyWindow when
  /// nothing has been pushed yet.
  Vec3 smoothed_position() const;
  Quaternion smoothed_rotation(bool* degenerate = nullptr) const;

 private:
  SmootherConfig config_;
  std::deque<Vec3> dp_;
  std::deque<Quaternion> dq_;
};

}  // namespace teleop

#endif  // ARMTELEOP_SMOOTHING_HPP_
