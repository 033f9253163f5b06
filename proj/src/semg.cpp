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

#include "teleop/semg.hpp"

#include <cmath>

#include "json.hpp"

namespace teleop {

namespace {

void check_window(std::span<const SemgFrame> window) {
  if (window.size() < 2) {
    throw WindowTooShort("feature window needs at least 2 samples, got " +
                         std::to_string(window.size()));
  }
}

void check_channel(std::size_t channel) {
  if (channel >= kSemgChannels) {
    throw ChannelCountMismatch("channel index " + std::to_string(channel) +
                               " out of range");
  }
}

double sigmoid(double z) {
  // Evaluate from the stable side to keep the output in (0, 1).
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

FeatureConfig::FeatureConfig(std::size_t n, std::size_t h) : window_len(n), hop(h) {
  if (n < 2) {
    throw Error("feature window length must be at least 2");
  }
  if (h < 1) {
    throw Error("feature hop must be at least 1");
  }
}

double feat_mav(std::span<const SemgFrame> window, std::size_t channel) {
  check_window(window);
  check_channel(channel);
  double sum = 0.0;
  for (const SemgFrame& f : window) {
    sum += std::fabs(f.ch[channel]);
  }
  return sum / static_cast<double>(window.size());
}

double feat_wl(std::span<const SemgFrame> window, std::size_t channel) {
  check_window(window);
  check_channel(channel);
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < window.size(); ++j) {
    sum += std::fabs(window[j + 1].ch[channel] - window[j].ch[channel]);
  }
  return sum;
}

double feat_rms(std::span<const SemgFrame> window, std::size_t channel) {
  check_window(window);
  check_channel(channel);
  double sum = 0.0;
  for (const SemgFrame& f : window) {
    sum += f.ch[channel] * f.ch[channel];
  }
  return std::sqrt(sum / static_cast<double>(window.size()));
}

FeatureVector build_feature_vector(std::span<const SemgFrame> window) {
  check_window(window);
  FeatureVector x{};
  for (std::size_t c = 0; c < kSemgChannels; ++c) {
    x[3 * c + 0] = feat_mav(window, c);
    x[3 * c + 1] = feat_wl(window, c);
    x[3 * c + 2] = feat_rms(window, c);
  }
  return x;
}

LogisticModel::LogisticModel() {
  mean.fill(0.0);
  stddev.fill(1.0);
}

double predict_prob(const LogisticModel& m, const FeatureVector& x) {
  double z = m.b;
  for (std::size_t i = 0; i < kFeatureDim; ++i) {
    z += m.w[i] * (x[i] - m.mean[i]) / m.stddev[i];
  }
  return sigmoid(z);
}

int decide(double p) { return p > 0.5 ? 1 : 0; }

LogisticModel train(std::span<const LabeledWindow> dataset,
                    const TrainConfig& config, std::vector<double>* loss_curve) {
  if (dataset.empty()) {
    throw SingleClassDataset("training dataset is empty");
  }
  std::size_t positives = 0;
  for (const LabeledWindow& s : dataset) {
    for (double v : s.x) {
      if (!std::isfinite(v)) {
        throw NonFiniteFeature("non-finite feature value in training data");
      }
    }
    positives += (s.label != 0) ? 1 : 0;
  }
  if (positives == 0 || positives == dataset.size()) {
    throw SingleClassDataset("training dataset contains a single class");
  }

  const std::size_t n = dataset.size();
  LogisticModel model;

  // Per-dimension standardization, stored with the model.
  for (std::size_t i = 0; i < kFeatureDim; ++i) {
    double mean = 0.0;
    for (const LabeledWindow& s : dataset) {
      mean += s.x[i];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const LabeledWindow& s : dataset) {
      const double d = s.x[i] - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    model.mean[i] = mean;
    model.stddev[i] = (var > 1e-24) ? std::sqrt(var) : 1.0;
  }

  std::vector<std::array<double, kFeatureDim>> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < kFeatureDim; ++i) {
      z[k][i] = (dataset[k].x[i] - model.mean[i]) / model.stddev[i];
    }
  }

  std::array<double, kFeatureDim> w{};
  double b = 0.0;

  auto loss_of = [&](const std::array<double, kFeatureDim>& wv, double bv) {
    double loss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double zk = bv;
      for (std::size_t i = 0; i < kFeatureDim; ++i) {
        zk += wv[i] * z[k][i];
      }
      const double y = dataset[k].label != 0 ? 1.0 : 0.0;
      // log(1 + e^-|z|) form avoids overflow for large |z|.
      const double softplus = std::log1p(std::exp(-std::fabs(zk)));
      loss += (zk > 0.0 ? (1.0 - y) * zk : -y * zk) + softplus;
    }
    loss /= static_cast<double>(n);
    double reg = 0.0;
    for (double wi : wv) {
      reg += wi * wi;
    }
    return loss + config.l2 * reg;
  };

  double prev_loss = loss_of(w, b);
  if (loss_curve != nullptr) {
    loss_curve->push_back(prev_loss);
  }

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::array<double, kFeatureDim> grad_w{};
    double grad_b = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double zk = b;
      for (std::size_t i = 0; i < kFeatureDim; ++i) {
        zk += w[i] * z[k][i];
      }
      const double err = sigmoid(zk) - (dataset[k].label != 0 ? 1.0 : 0.0);
      for (std::size_t i = 0; i < kFeatureDim; ++i) {
        grad_w[i] += err * z[k][i];
      }
      grad_b += err;
    }
    for (std::size_t i = 0; i < kFeatureDim; ++i) {
      grad_w[i] = grad_w[i] / static_cast<double>(n) + 2.0 * config.l2 * w[i];
      w[i] -= config.learning_rate * grad_w[i];
    }
    b -= config.learning_rate * grad_b / static_cast<double>(n);

    const double loss = loss_of(w, b);
    if (loss_curve != nullptr) {
      loss_curve->push_back(loss);
    }
    if (!(loss <= prev_loss + 1e-12)) {
      throw TrainingDiverged("training loss increased at epoch " +
                             std::to_string(epoch) + ": " +
                             std::to_string(prev_loss) + " -> " +
                             std::to_string(loss) +
                             "; lower the learning rate");
    }
    prev_loss = loss;
  }

  model.w = w;
  model.b = b;
  return model;
}

SlidingWindower::SlidingWindower(FeatureConfig config) : config_(config) {}

std::optional<FeatureVector> SlidingWindower::push(const SemgFrame& frame) {
  buffer_.push_back(frame);
  if (buffer_.size() < config_.window_len) {
    return std::nullopt;
  }
  std::vector<SemgFrame> window(buffer_.begin(), buffer_.end());
  FeatureVector x = build_feature_vector(window);
  for (std::size_t i = 0; i < config_.hop && !buffer_.empty(); ++i) {
    buffer_.pop_front();
  }
  return x;
}

void SlidingWindower::reset() { buffer_.clear(); }

GripDebouncer::GripDebouncer(int threshold) : threshold_(threshold) {
  if (threshold < 1) {
    throw Error("debounce threshold must be at least 1");
  }
}

std::optional<int> GripDebouncer::push(int decision) {
  if (decision == stable_) {
    candidate_ = stable_;
    run_ = 0;
    return std::nullopt;
  }
  if (decision == candidate_) {
    ++run_;
  } else {
    candidate_ = decision;
    run_ = 1;
  }
  if (run_ >= threshold_) {
    stable_ = candidate_;
    run_ = 0;
    return stable_;
  }
  return std::nullopt;
}

std::string model_to_json(const LogisticModel& m, const FeatureConfig& feat) {
  nlohmann::ordered_json j;
  j["w"] = m.w;
  j["b"] = m.b;
  j["mean"] = m.mean;
  j["std"] = m.stddev;
  j["config"] = {{"window_len", feat.window_len}, {"hop", feat.hop}};
  return j.dump();
}

std::pair<LogisticModel, FeatureConfig> model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("model file is not valid JSON: ") + e.what());
  }
  LogisticModel m;
  FeatureConfig feat;
  try {
    const auto& w = j.at("w");
    const auto& mean = j.at("mean");
    const auto& stddev = j.at("std");
    if (w.size() != kFeatureDim || mean.size() != kFeatureDim ||
        stddev.size() != kFeatureDim) {
      throw IoError("model arrays must have 24 entries");
    }
    for (std::size_t i = 0; i < kFeatureDim; ++i) {
      m.w[i] = w[i].get<double>();
      m.mean[i] = mean[i].get<double>();
      m.stddev[i] = stddev[i].get<double>();
    }
    m.b = j.at("b").get<double>();
    if (j.contains("config")) {
      feat = FeatureConfig(j["config"].value("window_len", feat.window_len),
                           j["config"].value("hop", feat.hop));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed model file: ") + e.what());
  }
  for (double v : m.w) {
    if (!std::isfinite(v)) {
      throw IoError("model weights must be finite");
    }
  }
  return {m, feat};
}

}  // namespace teleop
