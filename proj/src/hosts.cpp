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

#include "teleop/hosts.hpp"

#include <algorithm>
#include <cmath>

namespace teleop {

MasterHost::MasterHost(const MasterConfig& config)
    : config_(config),
      windower_(config.features),
      debouncer_(config.grip_debounce) {}

void MasterHost::load_model(const LogisticModel& model) { model_ = model; }

std::optional<WireMessage> MasterHost::imu_step_raw(
    std::uint64_t t_us, const std::array<double, 4>& q_upper,
    const std::array<double, 4>& q_forearm) {
  ImuSample sample;
  sample.t_us = t_us;
  try {
    sample.q_upper = Quaternion(q_upper[0], q_upper[1], q_upper[2], q_upper[3]);
    sample.q_forearm =
        Quaternion(q_forearm[0], q_forearm[1], q_forearm[2], q_forearm[3]);
  } catch (const NonUnitQuaternion&) {
    ++imu_faults_;
    return std::nullopt;
  }
  return imu_step(sample);
}

std::optional<WireMessage> MasterHost::imu_step(const ImuSample& sample) {
  const Vec3 wrist = wrist_position(config_.arm, sample);

  if (!last_wrist_.has_value()) {
    last_wrist_ = wrist;
    last_orient_ = sample.q_forearm;
    return std::nullopt;
  }

  const PoseIncrement inc = pose_increment(*last_wrist_, *last_orient_, wrist,
                                           sample.q_forearm, sample.t_us);
  last_wrist_ = wrist;
  last_orient_ = sample.q_forearm;

  WireMessage m;
  m.kind = MsgKind::pose_increment;
  m.t_us = sample.t_us;
  m.pose = {inc.dp.x,   inc.dp.y,   inc.dp.z,  inc.dq.eta(),
            inc.dq.x(), inc.dq.y(), inc.dq.z()};
  return m;
}

std::optional<WireMessage> MasterHost::semg_step(const SemgFrame& frame) {
  if (!model_.has_value()) {
    throw ModelNotLoaded("grip classifier model not loaded");
  }
  const std::optional<FeatureVector> x = windower_.push(frame);
  if (!x.has_value()) {
    return std::nullopt;
  }
  const int decision = decide(predict_prob(*model_, *x));
  const std::optional<int> change = debouncer_.push(decision);
  if (!change.has_value()) {
    return std::nullopt;
  }
  return make_grip_message(frame.t_us, static_cast<std::uint8_t>(*change));
}

WireMessage MasterHost::make_calibrate(std::uint64_t t_us,
                                       const RobotPose& initial) const {
  WireMessage m;
  m.kind = MsgKind::calibrate;
  m.t_us = t_us;
  m.pose = {initial.p.x,   initial.p.y,   initial.p.z,   initial.q.eta(),
            initial.q.x(), initial.q.y(), initial.q.z()};
  return m;
}

ReceiveBatch ingest_frames(std::span<const std::vector<std::uint8_t>> frames,
                           std::uint64_t now_us) {
  ReceiveBatch batch;
  for (const std::vector<std::uint8_t>& frame : frames) {
    const DecodeResult r = decode_message(frame);
    if (!r.ok()) {
      ++batch.decode_errors;
      continue;
    }
    const WireMessage& m = *r.message;
    switch (m.kind) {
      case MsgKind::pose_increment: {
        ++batch.pose_count;
        PoseIncrement inc;
        inc.t_us = m.t_us;
        inc.dp = {m.pose[0], m.pose[1], m.pose[2]};
        try {
          inc.dq = Quaternion(m.pose[3], m.pose[4], m.pose[5], m.pose[6]);
        } catch (const NonUnitQuaternion&) {
          ++batch.decode_errors;
          continue;
        }
        batch.increment = inc;  // newest wins within the cycle
        break;
      }
      case MsgKind::grip:
        ++batch.grip_count;
        batch.grip = GripCommand{now_us, m.grip_state != 0 ? 1 : 0};
        break;
      case MsgKind::calibrate: {
        RobotPose pose;
        pose.p = {m.pose[0], m.pose[1], m.pose[2]};
        try {
          pose.q = Quaternion(m.pose[3], m.pose[4], m.pose[5], m.pose[6]);
        } catch (const NonUnitQuaternion&) {
          ++batch.decode_errors;
          continue;
        }
        batch.calibrate_pose = pose;
        break;
      }
    }
  }
  return batch;
}

SlaveController::SlaveController(const SlaveConfig& config)
    : config_(config), smoother_(config.smoother) {}

void SlaveController::calibrate(const RobotPose& initial, std::uint64_t now_us) {
  calibration_ = initial;
  target_ = initial;
  calibrated_ = true;
  pending_.reset();
  smoother_.reset();
  last_update_us_ = now_us;
}

void SlaveController::offer_increment(const PoseIncrement& inc,
                                      std::uint64_t now_us) {
  pending_ = inc;
  last_update_us_ = now_us;
}

void SlaveController::offer_grip(const GripCommand& grip, std::uint64_t now_us) {
  grip_state_ = grip.state;
  last_update_us_ = now_us;
}

ControlOutput SlaveController::step(std::uint64_t now_us) {
  if (!calibrated_) {
    throw NotCalibrated("control step before calibration");
  }

  ControlOutput out;
  if (pending_.has_value()) {
    Vec3 dp = pending_->dp;
    const double norm = dp.norm();
    if (norm > config_.max_increment_m && norm > 0.0) {
      dp = dp * (config_.max_increment_m / norm);
      ++increment_clamps_;
    }
    smoother_.push(dp, pending_->dq);
    target_ = apply_pose_update(target_, smoother_.smoothed_position(),
                                smoother_.smoothed_rotation());
    // Safety envelope: never command outside the workspace box.
    const double h = config_.workspace_half_extent_m;
    target_.p.x = std::clamp(target_.p.x, calibration_.p.x - h, calibration_.p.x + h);
    target_.p.y = std::clamp(target_.p.y, calibration_.p.y - h, calibration_.p.y + h);
    target_.p.z = std::clamp(target_.p.z, calibration_.p.z - h, calibration_.p.z + h);
    pending_.reset();
    ++integrations_;
    out.integrated = true;
  }

  const std::uint64_t age =
      now_us >= last_update_us_ ? now_us - last_update_us_ : 0;
  max_staleness_us_ = std::max(max_staleness_us_, age);
  out.stale = age > config_.staleness_us;
  if (out.stale) {
    ++stale_cycles_;
  }

  out.pose = target_;
  out.grip_state = grip_state_;
  return out;
}

const RobotPose& SlaveController::target() const {
  if (!calibrated_) {
    throw NotCalibrated("no target pose before calibration");
  }
  return target_;
}

}  // namespace teleop
