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

#ifndef ARMTELEOP_IO_HPP_
#define ARMTELEOP_IO_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "teleop/kinematics.hpp"
#include "teleop/metrics.hpp"
#include "teleop/semg.hpp"

namespace teleop {

// ---------------------------------------------------------------------------
// Sensor log: JSON Lines, one record per line.
//   {"t_us": ..., "dev": "upper"|"forearm", "q": [w, x, y, z]}
//   {"t_us": ..., "dev": "forearm", "emg": [8 ints]}
// ---------------------------------------------------------------------------

/// Parsed sensor log with IMU records paired per timestamp.
struct SensorLog {
  std::vector<ImuSample> imu;
  std::vector<SemgFrame> semg;
};

std::string sensor_log_to_jsonl(const SensorLog& log);
SensorLog sensor_log_from_jsonl(const std::string& text);

// ---------------------------------------------------------------------------
// Trajectory files: CSV with header t_us,x,y,z[,qw,qx,qy,qz].
// ---------------------------------------------------------------------------

std::string trajectory_to_csv(const Trajectory& t);
Trajectory trajectory_from_csv(const std::string& text);

// ---------------------------------------------------------------------------
// Training dataset: JSON Lines, {"label": 0|1, "emg": [[8 ints] x window]}.
// ---------------------------------------------------------------------------

std::vector<LabeledWindow> dataset_from_jsonl(const std::string& text,
                                              std::size_t window_len);

std::string dataset_window_to_jsonl_line(int label,
                                         std::span<const SemgFrame> window);

// ---------------------------------------------------------------------------
// Files.
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path);

/// Writes via a temp file in the same directory plus rename, so consumers
/// never observe a half-written file.
void atomic_write_file(const std::string& path, const std::string& content);

// ---------------------------------------------------------------------------
// Flat key = value config files ('#' comments and blank lines ignored).
// ---------------------------------------------------------------------------

std::map<std::string, std::string> parse_config(const std::string& text);
std::string render_config(const std::map<std::string, std::string>& kv);

}  // namespace teleop

#endif  // ARMTELEOP_IO_HPP_
