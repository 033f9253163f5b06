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

#ifndef ARMTELEOP_LIVE_HPP_
#define ARMTELEOP_LIVE_HPP_

#include <cstdint>
#include <functional>
#include <string>

#include "teleop/simulation.hpp"

namespace teleop {

/// Wall-clock two-host run over TCP with length-prefixed frames.
///
/// Host 1 (master) connects, sends a calibrate frame, then streams pose
/// increments at 50 Hz and grip transitions from the 200 Hz sEMG thread.
/// Host 2 (slave) listens; a 250 Hz thread drains the socket without ever
/// blocking and a 1000 Hz thread integrates and records commanded poses.
struct LiveOptions {
  std::string address;  // "host:port"; host2 binds, host1 connects
  SimOptions pipeline;  // channel model is unused: the network is real
  /// Host 2 session length. On peer disconnect the slave keeps commanding
  /// the held pose through one staleness window, then finishes cleanly.
  double duration_s = 12.0;
  /// Host 1 gives up connecting after this long (retry with backoff).
  int connect_timeout_ms = 5000;
  /// Host 2 gives up waiting for a client after this long.
  int accept_timeout_ms = 10000;
  /// Test hook: reports the bound port once host 2 is listening (useful
  /// with port 0).
  std::function<void(std::uint16_t)> on_listening;
};

struct LiveResult {
  Trajectory human;           // host1
  Trajectory human_filtered;  // host1
  Trajectory commanded;       // host2
  std::vector<GripCommand> grip_transitions;  // host2
  SimStats stats;
  bool peer_disconnected = false;
};

/// Throws ConnectFailed when no listener appears within the timeout and
/// PeerDisconnected when the slave goes away before the scenario finishes.
LiveResult run_live_host1(const SensorLog& scenario, const LiveOptions& opts);

/// Never throws on peer loss: the slave holds the last pose through one
/// staleness window, records the disconnect, and completes.
LiveResult run_live_host2(const LiveOptions& opts);

}  // namespace teleop

#endif  // ARMTELEOP_LIVE_HPP_
