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

#include "teleop/simulation.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace teleop {

void RateConfig::validate() const {
  if (semg_period_us == 0 || imu_period_us == 0 || receive_period_us == 0 ||
      control_period_us == 0) {
    throw ScenarioInvalid("process periods must be positive");
  }
}

std::string SimStats::to_json() const {
  nlohmann::ordered_json j;
  j["sent_pose"] = sent_pose;
  j["sent_grip"] = sent_grip;
  j["dropped"] = dropped;
  j["received_pose"] = received_pose;
  j["received_grip"] = received_grip;
  j["decode_errors"] = decode_errors;
  j["integrations"] = integrations;
  j["control_cycles"] = control_cycles;
  j["stale_cycles"] = stale_cycles;
  j["max_staleness_us"] = max_staleness_us;
  j["increment_clamps"] = increment_clamps;
  j["imu_faults"] = imu_faults;
  j["grip_transitions"] = grip_transitions;
  return j.dump(2);
}

namespace {

class EventLog {
 public:
  void calibrate(std::uint64_t t) {
    line(t, R"("kind":"calibrate")");
  }
  void send(std::uint64_t t, const char* msg) {
    line(t, std::string(R"("kind":"send","msg":")") + msg + '"');
  }
  void send_grip(std::uint64_t t, int state) {
    line(t, std::string(R"("kind":"send","msg":"grip","state":)") +
                std::to_string(state));
  }
  void drop(std::uint64_t t, const char* msg) {
    line(t, std::string(R"("kind":"drop","msg":")") + msg + '"');
  }
  void recv(std::uint64_t t, const ReceiveBatch& batch) {
    std::ostringstream extra;
    extra << R"("kind":"recv","pose":)" << batch.pose_count << R"(,"grip":)"
          << batch.grip_count << R"(,"errors":)" << batch.decode_errors;
    line(t, extra.str());
  }
  void grip_state(std::uint64_t t, int state) {
    line(t, std::string(R"("kind":"grip","state":)") + std::to_string(state));
  }
  void stale(std::uint64_t t, bool value) {
    line(t, std::string(R"("kind":"stale","value":)") +
                (value ? "true" : "false"));
  }

  std::string str() const { return out_.str(); }

 private:
  void line(std::uint64_t t, const std::string& rest) {
    out_ << R"({"t_us":)" << t << ',' << rest << "}\n";
  }
  std::ostringstream out_;
};

}  // namespace

SimResult run_simulation(const SensorLog& scenario, const SimOptions& opts) {
  opts.rates.validate();
  opts.channel.validate();
  if (!scenario.semg.empty() && !opts.model.has_value()) {
    throw ScenarioInvalid(
        "scenario contains sEMG records but no classifier model was given");
  }
  if (scenario.imu.empty() && scenario.semg.empty()) {
    throw ScenarioInvalid("scenario has no sensor records");
  }

  MasterHost master(opts.master);
  if (opts.model.has_value()) {
    master.load_model(*opts.model);
  }
  SlaveController slave(opts.slave);

  // drop_prob models the armband Bluetooth hop: lost sensor records never
  // reach host 1. The inter-host link is a TCP stream, so the wire channel
  // only delays frames.
  ChannelModel wire_model = opts.channel;
  wire_model.drop_prob = 0.0;
  SimChannel channel(wire_model);
  Rng sensor_rng(opts.channel.seed ^ 0x9E3779B97F4A7C15ull);
  const double sensor_drop = opts.channel.drop_prob;

  SimResult result;
  SimStats& stats = result.stats;
  EventLog events;

  // Reference pipeline: same increments, same filter, no transport. This is
  // the trajectory an ideal channel and robot would track exactly.
  IncrementSmoother ref_smoother(opts.slave.smoother);
  RobotPose ref_pose = opts.initial_pose;

  // Calibration happens at t = 0 outside the lossy channel; a real session
  // would do this over a reliable handshake before motion starts.
  slave.calibrate(opts.initial_pose, 0);
  events.calibrate(0);

  std::optional<Vec3> wrist0;
  std::optional<Quaternion> orient0;

  std::uint64_t t_end = 0;
  if (!scenario.imu.empty()) {
    t_end = std::max(t_end, scenario.imu.back().t_us);
  }
  if (!scenario.semg.empty()) {
    t_end = std::max(t_end, scenario.semg.back().t_us);
  }

  std::size_t imu_idx = 0;
  std::size_t semg_idx = 0;
  int last_grip = 0;
  bool last_stale = false;

  auto send_message = [&](const WireMessage& m, std::uint64_t now) {
    if (m.kind == MsgKind::grip) {
      ++stats.sent_grip;
      events.send_grip(now, m.grip_state);
    } else {
      ++stats.sent_pose;
      events.send(now, "pose");
    }
    channel.send(encode_message(m), now);
  };

  auto semg_process = [&](std::uint64_t now) {
    while (semg_idx < scenario.semg.size() &&
           scenario.semg[semg_idx].t_us <= now) {
      const SemgFrame& frame = scenario.semg[semg_idx];
      ++semg_idx;
      if (sensor_rng.bernoulli(sensor_drop)) {
        ++stats.dropped;
        events.drop(now, "semg");
        continue;
      }
      const std::optional<WireMessage> m = master.semg_step(frame);
      if (m.has_value()) {
        send_message(*m, now);
      }
    }
  };

  auto imu_process = [&](std::uint64_t now) {
    while (imu_idx < scenario.imu.size() && scenario.imu[imu_idx].t_us <= now) {
      const ImuSample& sample = scenario.imu[imu_idx];
      ++imu_idx;
      if (sensor_rng.bernoulli(sensor_drop)) {
        ++stats.dropped;
        events.drop(now, "imu");
        continue;
      }
      const std::optional<WireMessage> m = master.imu_step(sample);
      if (!master.last_wrist().has_value()) {
        continue;  // rejected sample
      }
      if (!wrist0.has_value()) {
        wrist0 = *master.last_wrist();
        orient0 = *master.last_orientation();
        result.human.samples.push_back(TrajectorySample{
            sample.t_us, opts.initial_pose.p, opts.initial_pose.q});
        result.human_filtered.samples.push_back(TrajectorySample{
            sample.t_us, opts.initial_pose.p, opts.initial_pose.q});
        continue;
      }
      if (!m.has_value()) {
        continue;
      }
      // Measured human pose mapped into robot coordinates.
      const Vec3 p_cal = opts.initial_pose.p + (*master.last_wrist() - *wrist0);
      const Quaternion q_rel =
          quat_mul(*master.last_orientation(), quat_inverse(*orient0));
      result.human.samples.push_back(TrajectorySample{
          sample.t_us, p_cal, quat_mul(q_rel, opts.initial_pose.q)});

      // Reference filter fold.
      const Vec3 dp{m->pose[0], m->pose[1], m->pose[2]};
      const Quaternion dq =
          renormalized(m->pose[3], m->pose[4], m->pose[5], m->pose[6]);
      ref_smoother.push(dp, dq);
      ref_pose = apply_pose_update(ref_pose, ref_smoother.smoothed_position(),
                                   ref_smoother.smoothed_rotation());
      result.human_filtered.samples.push_back(
          TrajectorySample{sample.t_us, ref_pose.p, ref_pose.q});

      send_message(*m, now);
    }
  };

  auto receive_process = [&](std::uint64_t now) {
    const std::vector<std::vector<std::uint8_t>> frames = channel.poll(now);
    if (frames.empty()) {
      return;
    }
    const ReceiveBatch batch = ingest_frames(frames, now);
    stats.received_pose += batch.pose_count;
    stats.received_grip += batch.grip_count;
    stats.decode_errors += batch.decode_errors;
    events.recv(now, batch);
    if (batch.calibrate_pose.has_value()) {
      slave.calibrate(*batch.calibrate_pose, now);
      events.calibrate(now);
    }
    if (batch.increment.has_value()) {
      slave.offer_increment(*batch.increment, now);
    }
    if (batch.grip.has_value()) {
      slave.offer_grip(*batch.grip, now);
    }
  };

  auto control_process = [&](std::uint64_t now) {
    const ControlOutput out = slave.step(now);
    ++stats.control_cycles;
    result.commanded.samples.push_back(TrajectorySample{now, out.pose.p, out.pose.q});
    if (out.grip_state != last_grip) {
      last_grip = out.grip_state;
      ++stats.grip_transitions;
      result.grip_transitions.push_back(GripCommand{now, out.grip_state});
      events.grip_state(now, out.grip_state);
    }
    if (out.stale != last_stale) {
      last_stale = out.stale;
      events.stale(now, out.stale);
    }
  };

  std::uint64_t next_semg = 0;
  std::uint64_t next_imu = 0;
  std::uint64_t next_receive = 0;
  std::uint64_t next_control = 0;

  while (true) {
    const std::uint64_t t =
        std::min(std::min(next_semg, next_imu), std::min(next_receive, next_control));
    if (t > t_end) {
      break;
    }
    // Fixed tie order mirrors the data flow: sEMG, IMU, receive, control.
    if (next_semg == t) {
      semg_process(t);
      next_semg += opts.rates.semg_period_us;
    }
    if (next_imu == t) {
      imu_process(t);
      next_imu += opts.rates.imu_period_us;
    }
    if (next_receive == t) {
      receive_process(t);
      next_receive += opts.rates.receive_period_us;
    }
    if (next_control == t) {
      control_process(t);
      next_control += opts.rates.control_period_us;
    }
  }

  stats.integrations = slave.integrations();
  stats.stale_cycles = slave.stale_cycles();
  stats.max_staleness_us = slave.max_staleness_us();
  stats.increment_clamps = slave.increment_clamps();
  stats.imu_faults = master.imu_faults();
  result.event_log = events.str();
  return result;
}

}  // namespace teleop
