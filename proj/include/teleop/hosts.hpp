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

#ifndef ARMTELEOP_HOSTS_HPP_
#define ARMTELEOP_HOSTS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "teleop/kinematics.hpp"
#include "teleop/semg.hpp"
#include "teleop/smoothing.hpp"
#include "teleop/wire.hpp"

namespace teleop {

/// Debounced gripper command, 0 = open, 1 = close.
struct GripCommand {
  std::uint64_t t_us = 0;
  int state = 0;
};

// ---------------------------------------------------------------------------
// Master side (host 1): turns sensor streams into wire messages.
// ---------------------------------------------------------------------------

struct MasterConfig {
  ArmModel arm;
  FeatureConfig features;
  int grip_debounce = 2;
};

/// The IMU path (imu_step) and the sEMG path (semg_step) touch disjoint
/// state, so live mode may drive them from their own threads; a single step
/// function must still have one caller at a time.
class MasterHost {
 public:
  explicit MasterHost(const MasterConfig& config);

  void load_model(const LogisticModel& model);
  bool has_model() const { return model_.has_value(); }

  /// 50 Hz step. The first accepted sample only establishes the previous
  /// pose; every later one emits a pose-increment message.
  std::optional<WireMessage> imu_step(const ImuSample& sample);

  /// Same step fed with raw sensor components (scalar-first), the form a
  /// device driver delivers. A corrupt quaternion rejects the sample, keeps
  /// the previous pose, and bumps the fault counter.
  std::optional<WireMessage> imu_step_raw(std::uint64_t t_us,
                                          const std::array<double, 4>& q_upper,
                                          const std::array<double, 4>& q_forearm);

  /// 200 Hz step: one raw frame in, a grip message out whenever the
  /// debounced classifier decision changes state. Throws ModelNotLoaded.
  std::optional<WireMessage> semg_step(const SemgFrame& frame);

  WireMessage make_calibrate(std::uint64_t t_us, const RobotPose& initial) const;

  /// Master-side wrist position of the last accepted sample.
  const std::optional<Vec3>& last_wrist() const { return last_wrist_; }
  const std::optional<Quaternion>& last_orientation() const { return last_orient_; }

  int grip_state() const { return debouncer_.stable_state(); }
  std::uint64_t imu_faults() const { return imu_faults_; }

 private:
  MasterConfig config_;
  std::optional<Vec3> last_wrist_;
  std::optional<Quaternion> last_orient_;
  std::uint64_t imu_faults_ = 0;

  std::optional<LogisticModel> model_;
  SlidingWindower windower_;
  GripDebouncer debouncer_;
};

// ---------------------------------------------------------------------------
// Slave side (host 2): 250 Hz receive path and 1000 Hz control path.
// ---------------------------------------------------------------------------

struct SlaveConfig {
  SmootherConfig smoother;
  std::uint64_t staleness_us = 100000;   // 5 missed IMU periods
  double max_increment_m = 0.05;         // per-increment translation clamp
  double workspace_half_extent_m = 0.5;  // box half-width about calibration
};

/// What one receive-cycle drain produced. Early messages are absorbed:
/// only the newest pose increment of the batch survives.
struct ReceiveBatch {
  std::optional<PoseIncrement> increment;
  std::optional<GripCommand> grip;
  std::optional<RobotPose> calibrate_pose;
  std::uint64_t pose_count = 0;
  std::uint64_t grip_count = 0;
  std::uint64_t decode_errors = 0;
};

/// Stateless frame-batch decoder for the 250 Hz check cycle. Decode failures
/// are counted, never fatal: a corrupt frame must not take down the slave.
ReceiveBatch ingest_frames(std::span<const std::vector<std::uint8_t>> frames,
                           std::uint64_t now_us);

struct ControlOutput {
  RobotPose pose;
  int grip_state = 0;
  bool stale = false;
  bool integrated = false;  // did this cycle consume a new increment
};

/// Owns the smoother and the target pose. Exactly one increment integration
/// happens per offered increment no matter how much faster the control loop
/// runs; with nothing new, the held target is re-commanded unchanged.
class SlaveController {
 public:
  explicit SlaveController(const SlaveConfig& config);

  void calibrate(const RobotPose& initial, std::uint64_t now_us);
  bool calibrated() const { return calibrated_; }

  /// Stage a new increment for the next control cycle; a second offer before
  /// the cycle runs replaces the first (newest wins).
  void offer_increment(const PoseIncrement& inc, std::uint64_t now_us);
  void offer_grip(const GripCommand& grip, std::uint64_t now_us);

  /// One 1000 Hz control cycle. Throws NotCalibrated before calibration.
  ControlOutput step(std::uint64_t now_us);

  const RobotPose& target() const;
  std::uint64_t integrations() const { return integrations_; }
  std::uint64_t stale_cycles() const { return stale_cycles_; }
  std::uint64_t max_staleness_us() const { return max_staleness_us_; }
  std::uint64_t increment_clamps() const { return increment_clamps_; }

 private:
  SlaveConfig config_;
  IncrementSmoother smoother_;
  bool calibrated_ = false;
  RobotPose calibration_{};
  RobotPose target_{};
  std::optional<PoseIncrement> pending_;
  int grip_state_ = 0;
  std::uint64_t last_update_us_ = 0;
  std::uint64_t integrations_ = 0;
  std::uint64_t stale_cycles_ = 0;
  std::uint64_t max_staleness_us_ = 0;
  std::uint64_t increment_clamps_ = 0;
};

}  // namespace teleop

#endif  // ARMTELEOP_HOSTS_HPP_
