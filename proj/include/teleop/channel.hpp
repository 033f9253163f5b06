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

#ifndef ARMTELEOP_CHANNEL_HPP_
#define ARMTELEOP_CHANNEL_HPP_

#include <cstdint>
#include <deque>
#include <vector>

#include "teleop/errors.hpp"
#include "teleop/rng.hpp"

namespace teleop {

/// Degradation model for the sensor-to-robot path. The simulation applies
/// drop_prob at the wearable hop (a lost armband sample never reaches host 1,
/// and the next increment simply spans the gap) and latency/jitter on the
/// inter-host link, which is a TCP stream and therefore delays but never
/// loses frames.
struct ChannelModel {
  std::uint64_t latency_us = 0;  // base one-way delay
  std::uint64_t jitter_us = 0;   // uniform jitter bound (+/-)
  double drop_prob = 0.0;        // per-record sensor loss probability
  std::uint64_t seed = 0;

  void validate() const;
};

/// Deterministic in-memory message channel for simulation. Delivery order
/// is preserved (stream-transport semantics): a delayed message delays
/// everything behind it.
class SimChannel {
 public:
  explicit SimChannel(const ChannelModel& model);

  /// Returns false when the message was dropped.
  bool send(std::vector<std::uint8_t> frame, std::uint64_t now_us);

  /// All frames whose delivery time has arrived, oldest first.
  std::vector<std::vector<std::uint8_t>> poll(std::uint64_t now_us);

  std::uint64_t sent() const { return sent_; }
  std::uint64_t dropped() const { return dropped_; }

 private:
  struct Delivery {
    std::uint64_t deliver_us;
    std::vector<std::uint8_t> frame;
  };

  ChannelModel model_;
  Rng rng_;
  std::deque<Delivery> queue_;
  std::uint64_t last_deliver_us_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t dropped_ = 0;
};

}  // namespace teleop

#endif  // ARMTELEOP_CHANNEL_HPP_
