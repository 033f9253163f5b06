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

#include <cmath>

#include "doctest.h"
#include "teleop/rng.hpp"

using namespace teleop;

namespace {

Trajectory grid(std::uint64_t start_us, std::uint64_t step_us, std::size_t n,
                const Vec3& origin, const Vec3& velocity_per_step) {
  Trajectory t;
  for (std::size_t k = 0; k < n; ++k) {
    t.samples.push_back(TrajectorySample{
        start_us + k * step_us, origin + velocity_per_step * static_cast<double>(k),
        std::nullopt});
  }
  return t;
}

}  // namespace

TEST_CASE("identical grids pair completely") {
  const Trajectory a = grid(0, 20000, 50, {0, 0, 0}, {0.01, 0, 0});
  const PairedPositions p = pair_trajectories(a, a, 2000);
  CHECK(p.pairs.size() == 50);
  CHECK(p.unpaired == 0);
}

TEST_CASE("offset beyond tolerance pairs nothing") {
  const Trajectory a = grid(0, 20000, 20, {0, 0, 0}, {0.01, 0, 0});
  const Trajectory b = grid(2001, 20000, 20, {0, 0, 0}, {0.01, 0, 0});
  const PairedPositions p = pair_trajectories(a, b, 2000);
  CHECK(p.pairs.empty());
  CHECK(p.unpaired == 20);
}

TEST_CASE("a 50 Hz reference pairs fully against a 1000 Hz track") {
  const Trajectory slow = grid(0, 20000, 50, {0, 0, 0}, {0.01, 0, 0});
  const Trajectory fast = grid(0, 1000, 981, {0, 0, 0}, {0.0005, 0, 0});
  const PairedPositions p = pair_trajectories(slow, fast, 500);
  CHECK(p.pairs.size() == 50);
  CHECK(p.unpaired == 0);
}

TEST_CASE("pairing picks the nearest timestamp") {
  Trajectory a;
  a.samples.push_back({10000, {1, 0, 0}, std::nullopt});
  Trajectory b;
  b.samples.push_back({9000, {2, 0, 0}, std::nullopt});
  b.samples.push_back({10400, {3, 0, 0}, std::nullopt});
  const PairedPositions p = pair_trajectories(a, b, 2000);
  REQUIRE(p.pairs.size() == 1);
  CHECK(p.pairs[0][1].x == 3.0);  // 10400 is closer than 9000
}

TEST_CASE("empty trajectories are rejected") {
  const Trajectory a = grid(0, 1000, 3, {0, 0, 0}, {0, 0, 0});
  CHECK_THROWS_AS(pair_trajectories(a, Trajectory{}, 100), EmptyTrajectory);
  CHECK_THROWS_AS(pair_trajectories(Trajectory{}, a, 100), EmptyTrajectory);
}

TEST_CASE("strictly increasing timestamps are enforced") {
  Trajectory bad;
  bad.samples.push_back({5, {0, 0, 0}, std::nullopt});
  bad.samples.push_back({5, {1, 0, 0}, std::nullopt});
  CHECK_THROWS(bad.validate());
}

TEST_CASE("rmse and mae of identical trajectories are zero") {
  const Trajectory a = grid(0, 1000, 30, {0.1, 0.2, 0.3}, {0.001, 0.002, 0});
  const PairedPositions p = pair_trajectories(a, a, 10);
  for (int axis = 0; axis < 3; ++axis) {
    CHECK(rmse(p, axis) == 0.0);
    CHECK(mae(p, axis) == 0.0);
  }
}

TEST_CASE("constant offset shows up verbatim in both metrics") {
  const Trajectory a = grid(0, 1000, 25, {0, 0, 0}, {0.01, 0, 0});
  const Trajectory b = grid(0, 1000, 25, {0, 0.004, 0}, {0.01, 0, 0});
  const PairedPositions p = pair_trajectories(a, b, 10);
  CHECK(rmse(p, 1) == doctest::Approx(0.004).epsilon(1e-12));
  CHECK(mae(p, 1) == doctest::Approx(0.004).epsilon(1e-12));
}

TEST_CASE("two-sample worked example") {
  // Differences 0.01 and -0.03 on x.
  Trajectory a;
  a.samples.push_back({0, {0.01, 0, 0}, std::nullopt});
  a.samples.push_back({1000, {-0.03, 0, 0}, std::nullopt});
  Trajectory b;
  b.samples.push_back({0, {0, 0, 0}, std::nullopt});
  b.samples.push_back({1000, {0, 0, 0}, std::nullopt});
  const PairedPositions p = pair_trajectories(a, b, 10);
  CHECK(rmse(p, 0) == doctest::Approx(std::sqrt(5e-4)).epsilon(1e-12));
  CHECK(mae(p, 0) == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("mae never exceeds rmse") {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    Trajectory a;
    Trajectory b;
    const std::size_t n = 2 + rng.next_u64() % 40;
    for (std::size_t k = 0; k < n; ++k) {
      const Vec3 pa{rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
      const Vec3 pb{rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
      a.samples.push_back({k * 1000, pa, std::nullopt});
      b.samples.push_back({k * 1000, pb, std::nullopt});
    }
    const PairedPositions p = pair_trajectories(a, b, 10);
    for (int axis = 0; axis < 3; ++axis) {
      CHECK(mae(p, axis) <= rmse(p, axis) + 1e-15);
    }
  }
}

TEST_CASE("metrics are symmetric and translation invariant") {
  Rng rng(62);
  Trajectory a = grid(0, 1000, 40, {0, 0, 0}, {0.01, 0.005, -0.002});
  Trajectory b = a;
  for (TrajectorySample& s : b.samples) {
    s.p += Vec3{rng.normal(0, 0.01), rng.normal(0, 0.01), rng.normal(0, 0.01)};
  }

  const PairedPositions ab = pair_trajectories(a, b, 10);
  const PairedPositions ba = pair_trajectories(b, a, 10);
  const Vec3 shift{1.5, -2.0, 0.25};
  Trajectory a_shifted = a;
  Trajectory b_shifted = b;
  for (TrajectorySample& s : a_shifted.samples) {
    s.p += shift;
  }
  for (TrajectorySample& s : b_shifted.samples) {
    s.p += shift;
  }
  const PairedPositions shifted = pair_trajectories(a_shifted, b_shifted, 10);

  for (int axis = 0; axis < 3; ++axis) {
    CHECK(rmse(ab, axis) == doctest::Approx(rmse(ba, axis)).epsilon(1e-12));
    CHECK(rmse(ab, axis) == doctest::Approx(rmse(shifted, axis)).epsilon(1e-9));
    CHECK(mae(ab, axis) == doctest::Approx(mae(shifted, axis)).epsilon(1e-9));
  }
}

TEST_CASE("evaluate_trajectories fills the per-axis report") {
  const Trajectory a = grid(0, 1000, 25, {0, 0, 0}, {0.01, 0, 0});
  const Trajectory b = grid(0, 1000, 25, {0, 0.004, 0}, {0.01, 0, 0});
  const MetricsReport r = evaluate_trajectories(a, b, 10);
  CHECK(r.paired == 25);
  CHECK(r.unpaired == 0);
  CHECK(r.axes[1].rmse == doctest::Approx(0.004));
  CHECK(r.axes[1].mae == doctest::Approx(0.004));
  for (int axis = 0; axis < 3; ++axis) {
    CHECK(r.axes[axis].rmse >= r.axes[axis].mae - 1e-15);
  }
}

TEST_CASE("rmse and mae demand at least one pair") {
  PairedPositions empty;
  CHECK_THROWS_AS(rmse(empty, 0), NoPairs);
  CHECK_THROWS_AS(mae(empty, 0), NoPairs);
}
