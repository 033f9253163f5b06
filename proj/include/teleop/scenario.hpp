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

#ifndef ARMTELEOP_SCENARIO_HPP_
#define ARMTELEOP_SCENARIO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "teleop/io.hpp"
#include "teleop/kinematics.hpp"
#include "teleop/metrics.hpp"

namespace teleop {

enum class Shape {
  square,
  triangle,
  circle,
  pentagram,
};

Shape shape_from_name(const std::string& name);
const char* shape_name(Shape s);

/// Synthetic free-motion specification: the wrist traces a closed planar
/// shape at constant speed. Shapes live in the vertical X-Z plane of the
/// shoulder frame at a fixed Y offset (facing the operator, wall-drawing
/// style); `plane_rotation` can reorient that plane.
struct ShapeSpec {
  Shape shape = Shape::square;
  double size_m = 0.30;             // side length, or diameter for circle/star
  Vec3 center{0.35, 0.10, 0.0};     // shape center in the shoulder frame
  Quaternion plane_rotation;        // identity = X-Z plane
  double duration_s = 10.0;
  double imu_rate_hz = 50.0;
  double quat_noise_rad = 0.0;      // zero-mean angular noise on each quaternion
  std::uint64_t seed = 0;

  void validate() const;
};

struct ShapeScenario {
  SensorLog log;          // IMU records only
  Trajectory truth;       // noise-free wrist path, 50 Hz
};

/// Generates armband quaternion streams whose forward kinematics reproduce
/// the requested wrist path exactly (before noise), using the elbow-down
/// branch of planar two-link inverse kinematics. Throws UnreachablePath if
/// any path point leaves the arm's reachable annulus.
ShapeScenario gen_shape(const ShapeSpec& spec, const ArmModel& arm);

enum class SemgProfile {
  relaxed,
  contracted,
};

SemgProfile semg_profile_from_name(const std::string& name);

/// Default per-channel noise amplitudes (sensor units).
double semg_profile_amplitude(SemgProfile profile);

struct SemgSpec {
  SemgProfile profile = SemgProfile::relaxed;
  double duration_s = 10.0;
  double amplitude = -1.0;  // < 0 means the profile default
  double rate_hz = 200.0;
  std::uint64_t seed = 0;
  std::uint64_t start_us = 0;
};

/// 200 Hz zero-mean noise, rounded to integral sensor units; relaxed and
/// contracted differ only in amplitude. Deterministic per seed.
std::vector<SemgFrame> gen_semg(const SemgSpec& spec);

/// Labeled training windows synthesized from both profiles, JSONL-ready.
std::string gen_semg_dataset_jsonl(std::size_t windows_per_class,
                                   std::size_t window_len, std::uint64_t seed);

}  // namespace teleop

#endif  // ARMTELEOP_SCENARIO_HPP_
