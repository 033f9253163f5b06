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

#include "teleop/scenario.hpp"

#include <cmath>

#include "doctest.h"

using namespace teleop;

TEST_CASE("noise-free shape logs close the forward-kinematics loop") {
  // The inverse kinematics must reproduce each path point through Eq.-style
  // forward kinematics to machine precision.
  const ArmModel arm(0.3, 0.25);
  for (const Shape shape :
       {Shape::square, Shape::triangle, Shape::circle, Shape::pentagram}) {
    ShapeSpec spec;
    spec.shape = shape;
    spec.size_m = 0.30;
    spec.duration_s = 4.0;
    spec.quat_noise_rad = 0.0;
    const ShapeScenario scenario = gen_shape(spec, arm);

    REQUIRE(scenario.log.imu.size() == scenario.truth.samples.size());
    double max_err = 0.0;
    for (std::size_t k = 0; k < scenario.log.imu.size(); ++k) {
      const Vec3 p = wrist_position(arm, scenario.log.imu[k]);
      max_err = std::max(max_err, (p - scenario.truth.samples[k].p).norm());
    }
    CHECK(max_err <= 1e-9);
  }
}

TEST_CASE("circle with explicit radius stays a circle") {
  const ArmModel arm(0.3, 0.25);
  ShapeSpec spec;
  spec.shape = Shape::circle;
  spec.size_m = 0.30;  // radius 0.15
  spec.duration_s = 3.0;
  const ShapeScenario scenario = gen_shape(spec, arm);
  for (const TrajectorySample& s : scenario.truth.samples) {
    const Vec3 r = s.p - spec.center;
    CHECK(r.norm() == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(std::fabs(r.y) <= 1e-12);  // X-Z plane at fixed Y
  }
}

TEST_CASE("degenerate zero-size square yields a constant log") {
  const ArmModel arm(0.3, 0.25);
  ShapeSpec spec;
  spec.shape = Shape::square;
  spec.size_m = 0.0;
  spec.duration_s = 1.0;
  const ShapeScenario scenario = gen_shape(spec, arm);
  const Vec3 first = scenario.truth.samples.front().p;
  for (const TrajectorySample& s : scenario.truth.samples) {
    CHECK((s.p - first).norm() == 0.0);
  }
  for (const ImuSample& s : scenario.log.imu) {
    CHECK(s.q_upper.dot(scenario.log.imu[0].q_upper) >= 1.0 - 1e-12);
  }
}

TEST_CASE("paths outside the reachable annulus are rejected") {
  const ArmModel arm(0.3, 0.25);
  ShapeSpec far;
  far.center = {0.56, 0.0, 0.0};  // beyond 0.55 reach
  far.size_m = 0.0;
  far.duration_s = 1.0;
  CHECK_THROWS_AS(gen_shape(far, arm), UnreachablePath);

  ShapeSpec close;
  close.center = {0.02, 0.0, 0.0};  // inside the |l_U - l_F| hole
  close.size_m = 0.0;
  close.duration_s = 1.0;
  CHECK_THROWS_AS(gen_shape(close, arm), UnreachablePath);
}

TEST_CASE("shape spec validation") {
  ShapeSpec bad;
  bad.duration_s = 0.0;
  CHECK_THROWS_AS(bad.validate(), ScenarioInvalid);
  CHECK_THROWS_AS(shape_from_name("hexagon"), ScenarioInvalid);
  CHECK(shape_from_name("pentagram") == Shape::pentagram);
}

TEST_CASE("same seed reproduces the same noisy log") {
  const ArmModel arm(0.3, 0.25);
  ShapeSpec spec;
  spec.quat_noise_rad = 0.005;
  spec.duration_s = 2.0;
  spec.seed = 77;
  const ShapeScenario a = gen_shape(spec, arm);
  const ShapeScenario b = gen_shape(spec, arm);
  REQUIRE(a.log.imu.size() == b.log.imu.size());
  for (std::size_t k = 0; k < a.log.imu.size(); ++k) {
    CHECK(a.log.imu[k].q_upper.eta() == b.log.imu[k].q_upper.eta());
    CHECK((a.log.imu[k].q_upper.eps() - b.log.imu[k].q_upper.eps()).norm() == 0.0);
    CHECK(a.log.imu[k].q_forearm.eta() == b.log.imu[k].q_forearm.eta());
    CHECK((a.log.imu[k].q_forearm.eps() - b.log.imu[k].q_forearm.eps()).norm() == 0.0);
  }
}

TEST_CASE("noise moves the measured wrist but stays near the truth") {
  const ArmModel arm(0.3, 0.25);
  ShapeSpec spec;
  spec.quat_noise_rad = 0.3 * M_PI / 180.0;
  spec.duration_s = 2.0;
  spec.seed = 3;
  const ShapeScenario scenario = gen_shape(spec, arm);
  double max_err = 0.0;
  for (std::size_t k = 0; k < scenario.log.imu.size(); ++k) {
    const Vec3 p = wrist_position(arm, scenario.log.imu[k]);
    max_err = std::max(max_err, (p - scenario.truth.samples[k].p).norm());
  }
  CHECK(max_err > 1e-6);                       // noise did something
  CHECK(max_err <= arm.reach() * 10.0 * spec.quat_noise_rad);  // but stayed small
}

TEST_CASE("zero-amplitude sEMG is all zeros, and features follow") {
  SemgSpec spec;
  spec.amplitude = 0.0;
  spec.duration_s = 1.0;
  const std::vector<SemgFrame> frames = gen_semg(spec);
  REQUIRE(frames.size() == 200);
  for (const SemgFrame& f : frames) {
    for (double v : f.ch) {
      CHECK(v == 0.0);
    }
  }
  const FeatureVector x =
      build_feature_vector(std::span<const SemgFrame>(frames.data(), 100));
  for (double v : x) {
    CHECK(v == 0.0);
  }
}

TEST_CASE("sEMG generation is deterministic per seed and profile-scaled") {
  SemgSpec spec;
  spec.duration_s = 2.0;
  spec.seed = 12;

  spec.profile = SemgProfile::relaxed;
  const auto relaxed_a = gen_semg(spec);
  const auto relaxed_b = gen_semg(spec);
  REQUIRE(relaxed_a.size() == relaxed_b.size());
  for (std::size_t j = 0; j < relaxed_a.size(); ++j) {
    CHECK(relaxed_a[j].ch == relaxed_b[j].ch);
  }

  spec.profile = SemgProfile::contracted;
  const auto contracted = gen_semg(spec);

  auto mean_abs = [](const std::vector<SemgFrame>& frames) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const SemgFrame& f : frames) {
      for (double v : f.ch) {
        sum += std::fabs(v);
        ++n;
      }
    }
    return sum / static_cast<double>(n);
  };
  CHECK(mean_abs(contracted) > 5.0 * mean_abs(relaxed_a));
}

TEST_CASE("synthesized dataset trains an accurate classifier") {
  const std::string jsonl = gen_semg_dataset_jsonl(120, 100, 99);
  const std::vector<LabeledWindow> dataset = dataset_from_jsonl(jsonl, 100);
  REQUIRE(dataset.size() == 240);

  std::vector<LabeledWindow> train_set;
  std::vector<LabeledWindow> test_set;
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    (k % 5 == 4 ? test_set : train_set).push_back(dataset[k]);
  }
  const LogisticModel model = train(train_set);
  std::size_t correct = 0;
  for (const LabeledWindow& s : test_set) {
    correct += decide(predict_prob(model, s.x)) == s.label;
  }
  CHECK(static_cast<double>(correct) / static_cast<double>(test_set.size()) >= 0.99);
}
