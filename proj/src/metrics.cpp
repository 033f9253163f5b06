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

#include "teleop/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "teleop/errors.hpp"

namespace teleop {

void Trajectory::validate() const {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].t_us <= samples[i - 1].t_us) {
      throw EmptyTrajectory("trajectory timestamps must be strictly increasing");
    }
  }
}

PairedPositions pair_trajectories(const Trajectory& a, const Trajectory& b,
                                  std::uint64_t tol_us) {
  if (a.empty() || b.empty()) {
    throw EmptyTrajectory("cannot pair an empty trajectory");
  }
  a.validate();
  b.validate();

  PairedPositions out;
  out.pairs.reserve(a.samples.size());

  // b is sorted; walk a forward keeping a cursor into b.
  std::size_t j = 0;
  for (const TrajectorySample& sa : a.samples) {
    while (j + 1 < b.samples.size() && b.samples[j + 1].t_us <= sa.t_us) {
      ++j;
    }
    // Candidates: b[j] (<= sa.t) and b[j+1] (> sa.t).
    std::size_t best = j;
    auto dist = [&](std::size_t k) {
      const std::uint64_t tb = b.samples[k].t_us;
      return tb > sa.t_us ? tb - sa.t_us : sa.t_us - tb;
    };
    if (j + 1 < b.samples.size() && dist(j + 1) < dist(best)) {
      best = j + 1;
    }
    if (dist(best) <= tol_us) {
      out.pairs.push_back({sa.p, b.samples[best].p});
    } else {
      ++out.unpaired;
    }
  }
  return out;
}

namespace {

double axis_component(const Vec3& v, int axis) {
  switch (axis) {
    case 0:
      return v.x;
    case 1:
      return v.y;
    default:
      return v.z;
  }
}

void check_pairs(const PairedPositions& paired) {
  if (paired.pairs.empty()) {
    throw NoPairs("no paired samples to evaluate");
  }
}

}  // namespace

double rmse(const PairedPositions& paired, int axis) {
  check_pairs(paired);
  double sum = 0.0;
  for (const auto& pr : paired.pairs) {
    const double d = axis_component(pr[0], axis) - axis_component(pr[1], axis);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(paired.pairs.size()));
}

double mae(const PairedPositions& paired, int axis) {
  check_pairs(paired);
  double sum = 0.0;
  for (const auto& pr : paired.pairs) {
    sum += std::fabs(axis_component(pr[0], axis) - axis_component(pr[1], axis));
  }
  return sum / static_cast<double>(paired.pairs.size());
}

MetricsReport evaluate_trajectories(const Trajectory& a, const Trajectory& b,
                                    std::uint64_t tol_us) {
  const PairedPositions paired = pair_trajectories(a, b, tol_us);
  MetricsReport report;
  report.paired = paired.pairs.size();
  report.unpaired = paired.unpaired;
  for (int axis = 0; axis < 3; ++axis) {
    report.axes[axis].rmse = rmse(paired, axis);
    report.axes[axis].mae = mae(paired, axis);
  }
  return report;
}

}  // namespace teleop
