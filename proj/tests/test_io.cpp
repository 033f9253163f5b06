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

#include "teleop/io.hpp"

#include <filesystem>

#include "doctest.h"
#include "teleop/rng.hpp"

using namespace teleop;

namespace {

SensorLog sample_log() {
  SensorLog log;
  for (int k = 0; k < 5; ++k) {
    ImuSample s;
    s.t_us = k * 20000;
    s.q_upper = Quaternion::from_axis_angle({0, 0, 1}, 0.02 * k);
    s.q_forearm = Quaternion::from_axis_angle({0, 1, 0}, -0.01 * k);
    log.imu.push_back(s);
  }
  for (int j = 0; j < 12; ++j) {
    SemgFrame f;
    f.t_us = j * 5000;
    for (std::size_t c = 0; c < kSemgChannels; ++c) {
      f.ch[c] = static_cast<double>((j * 7 + static_cast<int>(c) * 3) % 11 - 5);
    }
    log.semg.push_back(f);
  }
  return log;
}

}  // namespace

TEST_CASE("sensor log JSONL round trip") {
  const SensorLog log = sample_log();
  const std::string text = sensor_log_to_jsonl(log);
  const SensorLog back = sensor_log_from_jsonl(text);

  REQUIRE(back.imu.size() == log.imu.size());
  REQUIRE(back.semg.size() == log.semg.size());
  for (std::size_t k = 0; k < log.imu.size(); ++k) {
    CHECK(back.imu[k].t_us == log.imu[k].t_us);
    CHECK(quat_angle_between(back.imu[k].q_upper, log.imu[k].q_upper) <= 1e-9);
    CHECK(quat_angle_between(back.imu[k].q_forearm, log.imu[k].q_forearm) <= 1e-9);
  }
  for (std::size_t j = 0; j < log.semg.size(); ++j) {
    CHECK(back.semg[j].t_us == log.semg[j].t_us);
    CHECK(back.semg[j].ch == log.semg[j].ch);
  }
}

TEST_CASE("sensor log parsing rejects malformed input") {
  // Missing forearm record for t=0.
  CHECK_THROWS_AS(sensor_log_from_jsonl(
                      R"({"t_us":0,"dev":"upper","q":[1,0,0,0]})" "\n"),
                  ScenarioInvalid);

  // Non-unit quaternion.
  CHECK_THROWS_AS(
      sensor_log_from_jsonl(
          R"({"t_us":0,"dev":"upper","q":[0.9,0,0,0]})" "\n"
          R"({"t_us":0,"dev":"forearm","q":[1,0,0,0]})" "\n"),
      ScenarioInvalid);

  // Backwards timestamps.
  CHECK_THROWS_AS(
      sensor_log_from_jsonl(
          R"({"t_us":100,"dev":"upper","q":[1,0,0,0]})" "\n"
          R"({"t_us":100,"dev":"forearm","q":[1,0,0,0]})" "\n"
          R"({"t_us":50,"dev":"upper","q":[1,0,0,0]})" "\n"
          R"({"t_us":50,"dev":"forearm","q":[1,0,0,0]})" "\n"),
      ScenarioInvalid);

  // Wrong channel count.
  CHECK_THROWS_AS(
      sensor_log_from_jsonl(R"({"t_us":0,"dev":"forearm","emg":[1,2,3]})" "\n"),
      ChannelCountMismatch);

  // Not JSON.
  CHECK_THROWS_AS(sensor_log_from_jsonl("garbage\n"), ScenarioInvalid);
}

TEST_CASE("trajectory CSV round trip with quaternions") {
  Trajectory t;
  Rng rng(71);
  for (int k = 0; k < 20; ++k) {
    TrajectorySample s;
    s.t_us = k * 1000;
    s.p = {rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
    s.q = Quaternion::from_axis_angle({0, 0, 1}, 0.1 * k);
    t.samples.push_back(s);
  }
  const Trajectory back = trajectory_from_csv(trajectory_to_csv(t));
  REQUIRE(back.samples.size() == t.samples.size());
  for (std::size_t k = 0; k < t.samples.size(); ++k) {
    CHECK(back.samples[k].t_us == t.samples[k].t_us);
    CHECK((back.samples[k].p - t.samples[k].p).norm() == 0.0);  // %.17g is exact
    REQUIRE(back.samples[k].q.has_value());
    CHECK(quat_angle_between(*back.samples[k].q, *t.samples[k].q) <= 1e-12);
  }
}

TEST_CASE("trajectory CSV round trip without quaternions") {
  Trajectory t;
  t.samples.push_back({0, {1.5, 0, 0}, std::nullopt});
  t.samples.push_back({1000, {2.5, 1e-17, -3.25}, std::nullopt});
  const Trajectory back = trajectory_from_csv(trajectory_to_csv(t));
  REQUIRE(back.samples.size() == 2);
  CHECK_FALSE(back.samples[0].q.has_value());
  CHECK(back.samples[1].p.y == 1e-17);
}

TEST_CASE("trajectory CSV rejects junk") {
  CHECK_THROWS_AS(trajectory_from_csv(""), IoError);
  CHECK_THROWS_AS(trajectory_from_csv("a,b,c\n"), IoError);
  CHECK_THROWS_AS(trajectory_from_csv("t_us,x,y,z\n1,2,3\n"), IoError);
}

TEST_CASE("dataset JSONL round trip through the feature extractor") {
  std::vector<SemgFrame> window(10);
  for (std::size_t j = 0; j < window.size(); ++j) {
    window[j].t_us = j * 5000;
    for (std::size_t c = 0; c < kSemgChannels; ++c) {
      window[j].ch[c] = static_cast<double>(static_cast<int>(j * c) % 7 - 3);
    }
  }
  const std::string line = dataset_window_to_jsonl_line(1, window) + "\n";
  const std::vector<LabeledWindow> parsed = dataset_from_jsonl(line, 10);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].label == 1);
  const FeatureVector direct = build_feature_vector(window);
  for (std::size_t i = 0; i < kFeatureDim; ++i) {
    CHECK(parsed[0].x[i] == doctest::Approx(direct[i]).epsilon(1e-12));
  }

  CHECK_THROWS_AS(dataset_from_jsonl(line, 11), IoError);
}

TEST_CASE("atomic writes leave no temp files behind") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "teleop_io_test";
  fs::remove_all(dir);
  const std::string target = (dir / "nested" / "file.txt").string();

  atomic_write_file(target, "payload");
  CHECK(read_file(target) == "payload");
  atomic_write_file(target, "rewritten");
  CHECK(read_file(target) == "rewritten");

  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "nested")) {
    ++entries;
  }
  CHECK(entries == 1);
  fs::remove_all(dir);
}

TEST_CASE("read_file reports missing paths") {
  CHECK_THROWS_AS(read_file("/nonexistent/teleop/file"), IoError);
}
