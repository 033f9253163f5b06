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

#include "teleop/channel.hpp"

#include <algorithm>
#include <utility>

namespace teleop {

void ChannelModel::validate() const {
  if (drop_prob < 0.0 || drop_prob > 1.0) {
    throw ScenarioInvalid("drop_prob must be in [0, 1]");
  }
}

SimChannel::SimChannel(const ChannelModel& model)
    : model_(model), rng_(model.seed) {
  model_.validate();
}

bool SimChannel::send(std::vector<std::uint8_t> frame, std::uint64_t now_us) {
  ++sent_;
  // Both draws happen unconditionally so the RNG stream does not depend on
  // outcomes; the same seed replays the same delays regardless of inspection.
  const bool drop = rng_.bernoulli(model_.drop_prob);
  const double jitter = rng_.uniform(-static_cast<double>(model_.jitter_us),
                                     static_cast<double>(model_.jitter_us));
  if (drop) {
    ++dropped_;
    return false;
  }
  double delay = static_cast<double>(model_.latency_us) + jitter;
  if (delay < 0.0) {
    delay = 0.0;
  }
  std::uint64_t deliver = now_us + static_cast<std::uint64_t>(delay);
  deliver = std::max(deliver, last_deliver_us_);
  last_deliver_us_ = deliver;
  queue_.push_back(Delivery{deliver, std::move(frame)});
  return true;
}

std::vector<std::vector<std::uint8_t>> SimChannel::poll(std::uint64_t now_us) {
  std::vector<std::vector<std::uint8_t>> out;
  while (!queue_.empty() && queue_.front().deliver_us <= now_us) {
    out.push_back(std::move(queue_.front().frame));
    queue_.pop_front();
  }
  return out;
}

}  // namespace teleop
