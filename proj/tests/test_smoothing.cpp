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

#include "teleop/smoothing.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "teleop/rng.hpp"

using namespace teleop;

namespace {

Quaternion random_unit_quaternion(Rng& rng) {
  return renormalized(rng.normal(0.0, 1.0), rng.normal(0.0, 1.0),
                      rng.normal(0.0, 1.0), rng.normal(0.0, 1.0));
}

/// Independent oracle for the chordal mean: power iteration on the 4x4
/// accumulator of sign-aligned outer products.
Quaternion power_iteration_mean(const std::vector<Quaternion>& window) {
  double s[4][4] = {};
  for (const Quaternion& q : window) {
    double c[4] = {q.eta(), q.x(), q.y(), q.z()};
    const double d = c[0] * window[0].eta() + c[1] * window[0].x() +
                     c[2] * window[0].y() + c[3] * window[0].z();
    if (d < 0.0) {
      for (double& v : c) v = -v;
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        s[i][j] += c[i] * c[j];
      }
    }
  }
  double v[4] = {1.0, 0.3, 0.2, 0.1};
  for (int it = 0; it < 500; ++it) {
    double next[4] = {};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        next[i] += s[i][j] * v[j];
      }
    }
    double n = std::sqrt(next[0] * next[0] + next[1] * next[1] +
                         next[2] * next[2] + next[3] * next[3]);
    for (int i = 0; i < 4; ++i) {
      v[i] = next[i] / n;
    }
  }
  return renormalized(v[0], v[1], v[2], v[3]);
}

Quaternion arithmetic_mean(const std::vector<Quaternion>& window) {
  double c[4] = {};
  for (const Quaternion& q : window) {
    double comp[4] = {q.eta(), q.x(), q.y(), q.z()};
    const double d = comp[0] * window[0].eta() + comp[1] * window[0].x() +
                     comp[2] * window[0].y() + comp[3] * window[0].z();
    const double sign = d < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < 4; ++i) {
      c[i] += sign * comp[i];
    }
  }
  return renormalized(c[0], c[1], c[2], c[3]);
}

constexpr double kDeg = M_PI / 180.0;

}  // namespace

TEST_CASE("avg_position of identical increments is the increment") {
  const std::vector<Vec3> w(10, Vec3{0.01, -0.02, 0.003});
  const Vec3 a = avg_position(w);
  CHECK(a.x == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(a.y == doctest::Approx(-0.02).epsilon(1e-15));
  CHECK(a.z == doctest::Approx(0.003).epsilon(1e-15));
}

TEST_CASE("avg_position of a 1..10 ramp is 5.5") {
  std::vector<Vec3> w;
  for (int i = 1; i <= 10; ++i) {
    w.push_back({static_cast<double>(i), 0.0, 0.0});
  }
  CHECK(avg_position(w).x == doctest::Approx(5.5).epsilon(1e-15));
}

TEST_CASE("avg_position warm-up: a single increment averages to itself") {
  const std::vector<Vec3> w{{0.4, 0.5, 0.6}};
  CHECK((avg_position(w) - Vec3{0.4, 0.5, 0.6}).norm() == 0.0);
}

TEST_CASE("avg_position rejects an empty window") {
  CHECK_THROWS_AS(avg_position(std::vector<Vec3>{}), EmptyWindow);
}

TEST_CASE("avg_position is linear in the window") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec3> w1(8);
    std::vector<Vec3> w2(8);
    std::vector<Vec3> combo(8);
    const double a = rng.uniform(-2, 2);
    const double b = rng.uniform(-2, 2);
    for (int i = 0; i < 8; ++i) {
      w1[i] = {rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
      w2[i] = {rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
      combo[i] = w1[i] * a + w2[i] * b;
    }
    const Vec3 lhs = avg_position(combo);
    const Vec3 rhs = avg_position(w1) * a + avg_position(w2) * b;
    CHECK((lhs - rhs).norm() <= 1e-12);
  }
}

TEST_CASE("avg_quaternion of a rank-1 window returns the input") {
  Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const Quaternion q = random_unit_quaternion(rng);
    const std::vector<Quaternion> w(10, q);
    bool degenerate = true;
    const Quaternion mean = avg_quaternion(w, &degenerate);
    CHECK_FALSE(degenerate);
    CHECK(mean.dot(q) >= 1.0 - 1e-12);
  }
}

TEST_CASE("avg_quaternion absorbs antipodal representatives") {
  Rng rng(33);
  const Quaternion q = random_unit_quaternion(rng);
  const std::vector<Quaternion> w{q, q.negated(), q, q.negated(), q};
  const Quaternion mean = avg_quaternion(w);
  CHECK(std::fabs(mean.dot(q)) >= 1.0 - 1e-12);
  // Sign fixed against the newest element (which is +q here).
  CHECK(mean.dot(w.back()) >= 0.0);
}

TEST_CASE("avg_quaternion of a 1..10 degree fan about z is about 5.5 degrees") {
  std::vector<Quaternion> w;
  for (int deg = 1; deg <= 10; ++deg) {
    w.push_back(Quaternion::from_axis_angle({0, 0, 1}, deg * kDeg));
  }
  const Quaternion mean = avg_quaternion(w);
  const Quaternion oracle = arithmetic_mean(w);
  CHECK(quat_angle_between(mean, oracle) <= 0.01 * kDeg);
  CHECK(mean.angle() == doctest::Approx(5.5 * kDeg).epsilon(1e-3));
}

TEST_CASE("avg_quaternion matches the arithmetic mean for tight windows") {
  // Windows dispersed within 10 degrees; the two means agree to 0.05 deg.
  Rng rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    const Quaternion center = random_unit_quaternion(rng);
    std::vector<Quaternion> w;
    for (int i = 0; i < 10; ++i) {
      const Vec3 axis{rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
      const double angle = rng.uniform(-5.0 * kDeg, 5.0 * kDeg);
      const Quaternion wobble = Quaternion::from_axis_angle(
          axis.norm() > 1e-9 ? axis : Vec3{1, 0, 0}, angle);
      w.push_back(quat_mul(wobble, center));
    }
    const Quaternion mean = avg_quaternion(w);
    CHECK(quat_angle_between(mean, arithmetic_mean(w)) <= 0.05 * kDeg);
  }
}

TEST_CASE("avg_quaternion agrees with an independent power-iteration oracle") {
  Rng rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const Quaternion center = random_unit_quaternion(rng);
    std::vector<Quaternion> w;
    for (int i = 0; i < 10; ++i) {
      const Vec3 axis{rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
      const Quaternion wobble = Quaternion::from_axis_angle(
          axis.norm() > 1e-9 ? axis : Vec3{1, 0, 0}, rng.uniform(-0.4, 0.4));
      w.push_back(quat_mul(wobble, center));
    }
    const Quaternion mean = avg_quaternion(w);
    const Quaternion oracle = power_iteration_mean(w);
    CHECK(quat_angle_between(mean, oracle) <= 1e-7);
  }
}

TEST_CASE("avg_quaternion output is unit with nonnegative dot to the newest") {
  Rng rng(36);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Quaternion> w;
    const int n = 1 + static_cast<int>(rng.next_u64() % 12);
    for (int i = 0; i < n; ++i) {
      w.push_back(random_unit_quaternion(rng));
    }
    const Quaternion mean = avg_quaternion(w);
    CHECK(std::fabs(mean.norm() - 1.0) <= 1e-12);
    CHECK(mean.dot(w.back()) >= 0.0);
  }
}

TEST_CASE("avg_quaternion flags an ambiguous spectrum and falls back") {
  // Two orthogonal representatives: the top two singular values coincide.
  const Quaternion a = Quaternion::identity();
  const Quaternion b = Quaternion::from_axis_angle({0, 0, 1}, M_PI);  // eta = 0
  bool degenerate = false;
  const Quaternion mean = avg_quaternion(std::vector<Quaternion>{a, b}, &degenerate);
  CHECK(degenerate);
  CHECK(std::fabs(mean.dot(arithmetic_mean({a, b}))) >= 1.0 - 1e-12);
}

TEST_CASE("avg_quaternion rejects an empty window") {
  CHECK_THROWS_AS(avg_quaternion(std::vector<Quaternion>{}), EmptyWindow);
}

TEST_CASE("pose update examples") {
  const RobotPose pose{{0.1, 0.0, 0.0}, Quaternion::identity()};

  const RobotPose unchanged = apply_pose_update(pose, {0, 0, 0}, Quaternion::identity());
  CHECK((unchanged.p - pose.p).norm() == 0.0);
  CHECK(quat_angle_between(unchanged.q, pose.q) == 0.0);

  const RobotPose moved = apply_pose_update(pose, {0.01, 0, 0}, Quaternion::identity());
  CHECK(moved.p.x == doctest::Approx(0.11).epsilon(1e-15));

  const Quaternion z90 = Quaternion::from_axis_angle({0, 0, 1}, M_PI / 2.0);
  const RobotPose turned = apply_pose_update(pose, {0, 0, 0}, z90);
  CHECK(quat_angle_between(turned.q, z90) <= 1e-12);
}

TEST_CASE("integrating a constant increment k times scales exactly") {
  const int k = 400;
  const Vec3 dp{0.001, -0.0005, 0.002};
  const double delta = 0.002;
  const Quaternion dq = Quaternion::from_axis_angle({0, 1, 0}, delta);

  RobotPose pose{{0, 0, 0}, Quaternion::identity()};
  IncrementSmoother smoother{SmootherConfig(10)};
  for (int i = 0; i < k; ++i) {
    smoother.push(dp, dq);
    pose = apply_pose_update(pose, smoother.smoothed_position(),
                             smoother.smoothed_rotation());
  }
  CHECK((pose.p - dp * static_cast<double>(k)).norm() <= 1e-12);
  CHECK(pose.q.angle() == doctest::Approx(k * delta).epsilon(1e-6));
}

TEST_CASE("smoother keeps only the most recent window") {
  IncrementSmoother smoother{SmootherConfig(3)};
  for (int i = 1; i <= 5; ++i) {
    smoother.push({static_cast<double>(i), 0, 0}, Quaternion::identity());
  }
  CHECK(smoother.size() == 3);
  CHECK(smoother.smoothed_position().x == doctest::Approx(4.0));  // (3+4+5)/3
}
