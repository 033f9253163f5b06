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

#include "doctest.h"

using namespace teleop;

namespace {

std::vector<std::uint8_t> payload(std::uint8_t tag) {
  return std::vector<std::uint8_t>{tag, 1, 2, 3};
}

}  // namespace

TEST_CASE("zero-latency channel delivers within the same instant") {
  SimChannel ch({});
  CHECK(ch.send(payload(1), 1000));
  const auto out = ch.poll(1000);
  REQUIRE(out.size() == 1);
  CHECK(out[0][0] == 1);
  CHECK(ch.poll(1000).empty());
}

TEST_CASE("latency holds messages back until due") {
  ChannelModel model;
  model.latency_us = 5000;
  SimChannel ch(model);
  ch.send(payload(1), 1000);
  CHECK(ch.poll(5999).empty());
  CHECK(ch.poll(6000).size() == 1);
}

TEST_CASE("drop probability one loses everything") {
  ChannelModel model;
  model.drop_prob = 1.0;
  SimChannel ch(model);
  for (int i = 0; i < 50; ++i) {
    CHECK_FALSE(ch.send(payload(1), i * 100));
  }
  CHECK(ch.dropped() == 50);
  CHECK(ch.poll(1000000).empty());
}

TEST_CASE("delivery preserves send order under jitter") {
  ChannelModel model;
  model.latency_us = 3000;
  model.jitter_us = 2500;
  model.seed = 9;
  SimChannel ch(model);
  for (std::uint8_t i = 0; i < 100; ++i) {
    ch.send(payload(i), i * 100);
  }
  const auto out = ch.poll(10000000);
  REQUIRE(out.size() == 100);
  for (std::uint8_t i = 0; i < 100; ++i) {
    CHECK(out[i][0] == i);
  }
}

TEST_CASE("same seed replays identical delivery times") {
  ChannelModel model;
  model.latency_us = 2000;
  model.jitter_us = 1500;
  model.drop_prob = 0.25;
  model.seed = 1234;

  auto trace = [&model]() {
    SimChannel ch(model);
    std::vector<std::size_t> counts;
    for (int i = 0; i < 200; ++i) {
      ch.send(payload(static_cast<std::uint8_t>(i)), i * 500);
      counts.push_back(ch.poll(i * 500).size());
    }
    counts.push_back(ch.poll(10000000).size());
    counts.push_back(ch.dropped());
    return counts;
  };
  CHECK(trace() == trace());
}

TEST_CASE("channel model validation") {
  ChannelModel bad;
  bad.drop_prob = 1.5;
  CHECK_THROWS_AS(bad.validate(), ScenarioInvalid);
}
