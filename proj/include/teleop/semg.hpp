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

#ifndef ARMTELEOP_SEMG_HPP_
#define ARMTELEOP_SEMG_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "teleop/errors.hpp"

namespace teleop {

inline constexpr std::size_t kSemgChannels = 8;
inline constexpr std::size_t kFeatureDim = 3 * kSemgChannels;

/// One 8-channel surface-EMG reading (integral sensor units).
struct SemgFrame {
  std::uint64_t t_us = 0;
  std::array<double, kSemgChannels> ch{};
};

struct FeatureConfig {
  std::size_t window_len = 100;  // samples per window (0.5 s at 200 Hz)
  std::size_t hop = 100;         // non-overlapping by default

  FeatureConfig() = default;
  FeatureConfig(std::size_t n, std::size_t h);
};

/// 24-D window descriptor, channel-major: [MAV1, WL1, RMS1, ..., MAV8, WL8, RMS8].
using FeatureVector = std::array<double, kFeatureDim>;

/// Mean absolute value of one channel over the window.
double feat_mav(std::span<const SemgFrame> window, std::size_t channel);
/// Waveform length: sum of absolute successive differences.
double feat_wl(std::span<const SemgFrame> window, std::size_t channel);
/// Root mean square.
double feat_rms(std::span<const SemgFrame> window, std::size_t channel);

FeatureVector build_feature_vector(std::span<const SemgFrame> window);

/// Binary logistic classifier over standardized features. `mean`/`stddev`
/// are the per-dimension statistics captured at training time and applied
/// inside predict_prob, so callers always pass raw feature vectors.
struct LogisticModel {
  std::array<double, kFeatureDim> w{};
  double b = 0.0;
  std::array<double, kFeatureDim> mean{};
  std::array<double, kFeatureDim> stddev{};

  LogisticModel();
};

/// P(contraction | x), in (0, 1).
double predict_prob(const LogisticModel& m, const FeatureVector& x);

/// Grip decision: 1 (close) iff p > 0.5, else 0 (open). The tie goes to
/// open, the fail-safe gripper state.
int decide(double p);

struct TrainConfig {
  int epochs = 500;
  double learning_rate = 0.1;
  double l2 = 1e-4;
};

struct LabeledWindow {
  FeatureVector x{};
  int label = 0;  // 0 = relaxed/open, 1 = contracted/close
};

/// Full-batch gradient descent on mean cross-entropy with L2 penalty,
/// parameters initialized to zero, features standardized per dimension.
/// Throws SingleClassDataset / NonFiniteFeature on bad input and
/// TrainingDiverged if the loss ever increases between epochs.
LogisticModel train(std::span<const LabeledWindow> dataset,
                    const TrainConfig& config = {},
                    std::vector<double>* loss_curve = nullptr);

/// Streaming windower: feed frames one at a time, get a feature vector out
/// whenever a full window is available (every `hop` frames thereafter).
/// Single-owner state; outputs match batch extraction over the same slices.
class SlidingWindower {
 public:
  explicit SlidingWindower(FeatureConfig config = {});

  std::optional<FeatureVector> push(const SemgFrame& frame);
  void reset();

  const FeatureConfig& config() const { return config_; }

 private:
  FeatureConfig config_;
  std::deque<SemgFrame> buffer_;
};

/// Suppresses single-window classifier flickers: a new state is reported
/// only after `threshold` consecutive identical decisions. threshold = 1
/// forwards every change unfiltered.
class GripDebouncer {
 public:
  explicit GripDebouncer(int threshold = 2);

  /// Returns the new stable state when it changes, nullopt otherwise.
  std::optional<int> push(int decision);

  int stable_state() const { return stable_; }

 private:
  int threshold_;
  int stable_ = 0;
  int candidate_ = 0;
  int run_ = 0;
};

// Model (de)serialization; JSON schema:
//   {"w": [24], "b": f, "mean": [24], "std": [24], "config": {...}}
std::string model_to_json(const LogisticModel& m, const FeatureConfig& feat);
std::pair<LogisticModel, FeatureConfig> model_from_json(const std::string& text);

}  // namespace teleop

#endif  // ARMTELEOP_SEMG_HPP_
