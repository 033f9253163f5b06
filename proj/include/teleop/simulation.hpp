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

#ifndef ARMTELEOP_SIMULATION_HPP_
#define ARMTELEOP_SIMULATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teleop/channel.hpp"
#include "teleop/hosts.hpp"
#include "teleop/io.hpp"
#include "teleop/metrics.hpp"

namespace teleop {

/// Periods of the four periodic processes, in microseconds.
struct RateConfig {
  std::uint64_t semg_period_us = 5000;     // 200 Hz sampling
  std::uint64_t imu_period_us = 20000;     // 50 Hz master data
  std::uint64_t receive_period_us = 4000;  // 250 Hz data checking
  std::uint64_t control_period_us = 1000;  // 1000 Hz robot control

  void validate() const;
};

struct SimOptions {
  ChannelModel channel;
  MasterConfig master;
  SlaveConfig slave;
  RateConfig rates;
  std::optional<LogisticModel> model;
  RobotPose initial_pose;  // robot pose at calibration
};

struct SimStats {
  std::uint64_t sent_pose = 0;
  std::uint64_t sent_grip = 0;
  std::uint64_t dropped = 0;  // sensor records lost on the wearable hop
  std::uint64_t received_pose = 0;
  std::uint64_t received_grip = 0;
  std::uint64_t decode_errors = 0;
  std::uint64_t integrations = 0;
  std::uint64_t control_cycles = 0;
  std::uint64_t stale_cycles = 0;
  std::uint64_t max_staleness_us = 0;
  std::uint64_t increment_clamps = 0;
  std::uint64_t imu_faults = 0;
  std::uint64_t grip_transitions = 0;

  std::string to_json() const;
};

struct SimResult {
  /// Robot-side commanded pose, one sample per control cycle.
  Trajectory commanded;
  /// Master-side measured wrist path, offset into robot coordinates.
  Trajectory human;
  /// Reference: the calibrated human path after the sliding-average filter,
  /// i.e. what an ideal channel and robot would reproduce exactly.
  Trajectory human_filtered;
  /// Commanded gripper transitions.
  std::vector<GripCommand> grip_transitions;
  SimStats stats;
  /// JSON Lines event log; byte-identical for identical seed and scenario.
  std::string event_log;
};

/// Deterministic single-threaded execution of the two-host pipeline on a
/// virtual microsecond clock. Processes due at the same instant run in the
/// data-flow order sEMG, IMU, receive, control. The slave is calibrated
/// directly at t=0 (calibration does not ride the lossy channel).
SimResult run_simulation(const SensorLog& scenario, const SimOptions& opts);

}  // namespace teleop

#endif  // ARMTELEOP_SIMULATION_HPP_
