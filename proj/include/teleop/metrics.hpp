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

#ifndef ARMTELEOP_METRICS_HPP_
#define ARMTELEOP_METRICS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "teleop/math.hpp"

namespace teleop {

struct TrajectorySample {
  std::uint64_t t_us = 0;
  Vec3 p;
  std::optional<Quaternion> q;
};

/// Time-ordered path of one side of the teleoperation mapping.
/// Timestamps must be strictly increasing.
struct Trajectory {
  std::vector<TrajectorySample> samples;

  void validate() const;
  bool empty() const { return samples.empty(); }
};

struct PairedPositions {
  std::vector<std::array<Vec3, 2>> pairs;  // [reference, candidate]
  std::size_t unpaired = 0;
};

/// Pairs each sample of `a` with the nearest-timestamp sample of `b`
/// within tol_us. Samples of `a` with no match are counted, not errored.
PairedPositions pair_trajectories(const Trajectory& a, const Trajectory& b,
                                  std::uint64_t tol_us);

/// Per-axis root mean square of the paired differences; axis 0..2 = x/y/z.
double rmse(const PairedPositions& paired, int axis);
/// Per-axis mean absolute difference.
double mae(const PairedPositions& paired, int axis);

struct AxisErrors {
  double rmse = 0.0;
  double mae = 0.0;
};

struct MetricsReport {
  std::array<AxisErrors, 3> axes{};  // x, y, z
  std::size_t paired = 0;
  std::size_t unpaired = 0;
};

MetricsReport evaluate_trajectories(const Trajectory& a, const Trajectory& b,
                                    std::uint64_t tol_us);

}  // namespace teleop

#endif  // ARMTELEOP_METRICS_HPP_
