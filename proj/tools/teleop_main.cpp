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

// Command-line front end: synthetic scenario generation, grip classifier
// training, simulated and live teleoperation runs, and trajectory metrics.
//
// Exit codes: 0 success, 2 input/validation error, 3 runtime fault.
// Failures additionally print one machine-readable JSON line to stderr.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "teleop/io.hpp"
#include "teleop/live.hpp"
#include "teleop/metrics.hpp"
#include "teleop/scenario.hpp"
#include "teleop/semg.hpp"
#include "teleop/simulation.hpp"

namespace {

using teleop::Vec3;

Vec3 parse_vec3(const std::string& text) {
  std::vector<double> parts;
  std::string field;
  std::istringstream in(text);
  while (std::getline(in, field, ',')) {
    parts.push_back(std::stod(field));
  }
  if (parts.size() != 3) {
    throw teleop::ScenarioInvalid("expected 'x,y,z', got '" + text + "'");
  }
  return {parts[0], parts[1], parts[2]};
}

constexpr double kDegToRad = M_PI / 180.0;

// --------------------------------------------------------------------------
// synth
// --------------------------------------------------------------------------

struct SynthArgs {
  std::string shape = "square";
  double size = 0.30;
  double duration = 10.0;
  std::string center = "0.35,0.1,0.0";
  double noise_deg = 0.0;
  double arm_upper = 0.30;
  double arm_forearm = 0.25;
  std::uint64_t seed = 0;
  std::string out_log;
  std::string out_truth;
  std::string semg_profile;
  double semg_amplitude = -1.0;
  std::string semg_dataset;
  std::size_t windows_per_class = 1000;
  std::size_t window_len = 100;
};

int run_synth(const SynthArgs& args) {
  if (args.out_log.empty() && args.semg_dataset.empty()) {
    throw teleop::ScenarioInvalid("nothing to do: give --out-log and/or --semg-dataset");
  }

  if (!args.out_log.empty()) {
    teleop::ShapeSpec spec;
    spec.shape = teleop::shape_from_name(args.shape);
    spec.size_m = args.size;
    spec.duration_s = args.duration;
    spec.center = parse_vec3(args.center);
    spec.quat_noise_rad = args.noise_deg * kDegToRad;
    spec.seed = args.seed;

    const teleop::ArmModel arm(args.arm_upper, args.arm_forearm);
    teleop::ShapeScenario scenario = teleop::gen_shape(spec, arm);

    if (!args.semg_profile.empty()) {
      teleop::SemgSpec semg;
      semg.profile = teleop::semg_profile_from_name(args.semg_profile);
      semg.duration_s = args.duration;
      semg.amplitude = args.semg_amplitude;
      semg.seed = args.seed + 1;
      scenario.log.semg = teleop::gen_semg(semg);
    }

    teleop::atomic_write_file(args.out_log,
                              teleop::sensor_log_to_jsonl(scenario.log));
    if (!args.out_truth.empty()) {
      teleop::atomic_write_file(args.out_truth,
                                teleop::trajectory_to_csv(scenario.truth));
    }
    std::cout << "wrote " << scenario.log.imu.size() << " IMU samples";
    if (!scenario.log.semg.empty()) {
      std::cout << " and " << scenario.log.semg.size() << " sEMG frames";
    }
    std::cout << " to " << args.out_log << "\n";
  }

  if (!args.semg_dataset.empty()) {
    const std::string jsonl = teleop::gen_semg_dataset_jsonl(
        args.windows_per_class, args.window_len, args.seed);
    teleop::atomic_write_file(args.semg_dataset, jsonl);
    std::cout << "wrote " << 2 * args.windows_per_class
              << " labeled windows to " << args.semg_dataset << "\n";
  }
  return 0;
}

// --------------------------------------------------------------------------
// train
// --------------------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string model_out;
  std::string report;
  std::size_t window_len = 100;
  std::size_t hop = 100;
  int epochs = 500;
  double lr = 0.1;
  double l2 = 1e-4;
  double val_split = 0.2;
  std::uint64_t seed = 0;
};

int run_train(const TrainArgs& args) {
  const std::vector<teleop::LabeledWindow> dataset =
      teleop::dataset_from_jsonl(teleop::read_file(args.data), args.window_len);
  if (dataset.empty()) {
    throw teleop::ScenarioInvalid("training dataset is empty");
  }

  // Deterministic shuffle, then split.
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  teleop::Rng rng(args.seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = rng.next_u64() % i;
    std::swap(order[i - 1], order[j]);
  }
  const std::size_t val_count =
      static_cast<std::size_t>(args.val_split * static_cast<double>(dataset.size()));
  std::vector<teleop::LabeledWindow> train_set;
  std::vector<teleop::LabeledWindow> val_set;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < val_count ? val_set : train_set).push_back(dataset[order[i]]);
  }

  teleop::TrainConfig config;
  config.epochs = args.epochs;
  config.learning_rate = args.lr;
  config.l2 = args.l2;

  std::vector<double> loss_curve;
  const teleop::LogisticModel model = teleop::train(train_set, config, &loss_curve);

  std::size_t correct = 0;
  for (const teleop::LabeledWindow& s : val_set) {
    if (teleop::decide(teleop::predict_prob(model, s.x)) == s.label) {
      ++correct;
    }
  }
  const double accuracy =
      val_set.empty() ? 1.0
                      : static_cast<double>(correct) / static_cast<double>(val_set.size());

  const teleop::FeatureConfig feat(args.window_len, args.hop);
  teleop::atomic_write_file(args.model_out, teleop::model_to_json(model, feat));

  nlohmann::ordered_json report;
  report["train_samples"] = train_set.size();
  report["val_samples"] = val_set.size();
  report["epochs"] = args.epochs;
  report["initial_loss"] = loss_curve.front();
  report["final_loss"] = loss_curve.back();
  report["val_accuracy"] = accuracy;
  if (!args.report.empty()) {
    teleop::atomic_write_file(args.report, report.dump(2) + "\n");
  }
  std::cout << "trained on " << train_set.size() << " windows, val accuracy "
            << accuracy << ", final loss " << loss_curve.back() << "\n";
  return 0;
}

// --------------------------------------------------------------------------
// run-sim / run-live shared pipeline flags
// --------------------------------------------------------------------------

struct PipelineArgs {
  std::string model_path;
  std::uint64_t latency_us = 0;
  std::uint64_t jitter_us = 0;
  double drop = 0.0;
  std::uint64_t seed = 0;
  std::size_t smooth_window = 10;
  int debounce = 2;
  std::uint64_t staleness_us = 100000;
  double max_increment = 0.05;
  double workspace_half = 0.5;
  std::string init_pose = "0,0,0";
  double arm_upper = 0.30;
  double arm_forearm = 0.25;
  std::uint64_t semg_period_us = 5000;
  std::uint64_t imu_period_us = 20000;
  std::uint64_t receive_period_us = 4000;
  std::uint64_t control_period_us = 1000;
  std::string config_path;
};

void add_pipeline_flags(CLI::App* cmd, PipelineArgs* args) {
  cmd->add_option("--model", args->model_path, "grip classifier model JSON");
  cmd->add_option("--latency-us", args->latency_us, "channel base delay");
  cmd->add_option("--jitter-us", args->jitter_us, "channel uniform jitter bound");
  cmd->add_option("--drop", args->drop, "per-record sensor loss probability")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", args->seed, "channel PRNG seed");
  cmd->add_option("--smooth-window", args->smooth_window, "sliding filter size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--debounce", args->debounce, "grip debounce count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--staleness-us", args->staleness_us, "stale-data threshold");
  cmd->add_option("--max-increment", args->max_increment,
                  "per-increment translation clamp (m)");
  cmd->add_option("--workspace-half", args->workspace_half,
                  "workspace box half extent about calibration (m)");
  cmd->add_option("--init-pose", args->init_pose, "initial robot position x,y,z");
  cmd->add_option("--arm-upper", args->arm_upper, "upper arm length (m)");
  cmd->add_option("--arm-forearm", args->arm_forearm, "forearm length (m)");
  cmd->add_option("--semg-period-us", args->semg_period_us, "sEMG process period");
  cmd->add_option("--imu-period-us", args->imu_period_us, "IMU process period");
  cmd->add_option("--receive-period-us", args->receive_period_us,
                  "data-check process period");
  cmd->add_option("--control-period-us", args->control_period_us,
                  "control process period");
  cmd->add_option("--config", args->config_path,
                  "flat key = value config file; command-line flags win");
}

/// Folds a config file into the pipeline arguments. Precedence is
/// flag > config > default: keys already set on the command line are left
/// alone. Unknown keys are a validation error.
void apply_config_file(CLI::App* cmd, PipelineArgs* args) {
  if (args->config_path.empty()) {
    return;
  }
  const std::map<std::string, std::string> kv =
      teleop::parse_config(teleop::read_file(args->config_path));

  using Setter = std::function<void(const std::string&)>;
  auto to_u64 = [](const std::string& v) {
    return static_cast<std::uint64_t>(std::stoull(v));
  };
  const std::map<std::string, Setter> setters = {
      {"model", [args](const std::string& v) { args->model_path = v; }},
      {"latency-us", [&, args](const std::string& v) { args->latency_us = to_u64(v); }},
      {"jitter-us", [&, args](const std::string& v) { args->jitter_us = to_u64(v); }},
      {"drop", [args](const std::string& v) { args->drop = std::stod(v); }},
      {"seed", [&, args](const std::string& v) { args->seed = to_u64(v); }},
      {"smooth-window",
       [&, args](const std::string& v) { args->smooth_window = to_u64(v); }},
      {"debounce", [args](const std::string& v) { args->debounce = std::stoi(v); }},
      {"staleness-us",
       [&, args](const std::string& v) { args->staleness_us = to_u64(v); }},
      {"max-increment",
       [args](const std::string& v) { args->max_increment = std::stod(v); }},
      {"workspace-half",
       [args](const std::string& v) { args->workspace_half = std::stod(v); }},
      {"init-pose", [args](const std::string& v) { args->init_pose = v; }},
      {"arm-upper", [args](const std::string& v) { args->arm_upper = std::stod(v); }},
      {"arm-forearm",
       [args](const std::string& v) { args->arm_forearm = std::stod(v); }},
      {"semg-period-us",
       [&, args](const std::string& v) { args->semg_period_us = to_u64(v); }},
      {"imu-period-us",
       [&, args](const std::string& v) { args->imu_period_us = to_u64(v); }},
      {"receive-period-us",
       [&, args](const std::string& v) { args->receive_period_us = to_u64(v); }},
      {"control-period-us",
       [&, args](const std::string& v) { args->control_period_us = to_u64(v); }},
  };

  for (const auto& [key, value] : kv) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw teleop::ScenarioInvalid("unknown config key '" + key + "' in " +
                                    args->config_path);
    }
    if (cmd->count("--" + key) > 0) {
      continue;  // command line wins
    }
    try {
      it->second(value);
    } catch (const teleop::Error&) {
      throw;
    } catch (const std::exception&) {
      throw teleop::ScenarioInvalid("bad value '" + value + "' for config key '" +
                                    key + "'");
    }
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

/// The fully resolved pipeline settings, re-ingestible as a config file.
std::string effective_config(const PipelineArgs& args) {
  std::map<std::string, std::string> kv;
  kv["model"] = args.model_path;
  kv["latency-us"] = std::to_string(args.latency_us);
  kv["jitter-us"] = std::to_string(args.jitter_us);
  kv["drop"] = format_number(args.drop);
  kv["seed"] = std::to_string(args.seed);
  kv["smooth-window"] = std::to_string(args.smooth_window);
  kv["debounce"] = std::to_string(args.debounce);
  kv["staleness-us"] = std::to_string(args.staleness_us);
  kv["max-increment"] = format_number(args.max_increment);
  kv["workspace-half"] = format_number(args.workspace_half);
  kv["init-pose"] = args.init_pose;
  kv["arm-upper"] = format_number(args.arm_upper);
  kv["arm-forearm"] = format_number(args.arm_forearm);
  kv["semg-period-us"] = std::to_string(args.semg_period_us);
  kv["imu-period-us"] = std::to_string(args.imu_period_us);
  kv["receive-period-us"] = std::to_string(args.receive_period_us);
  kv["control-period-us"] = std::to_string(args.control_period_us);
  return teleop::render_config(kv);
}

teleop::SimOptions make_sim_options(const PipelineArgs& args) {
  teleop::SimOptions opts;
  opts.channel.latency_us = args.latency_us;
  opts.channel.jitter_us = args.jitter_us;
  opts.channel.drop_prob = args.drop;
  opts.channel.seed = args.seed;
  opts.master.arm = teleop::ArmModel(args.arm_upper, args.arm_forearm);
  opts.master.grip_debounce = args.debounce;
  opts.slave.smoother = teleop::SmootherConfig(args.smooth_window);
  opts.slave.staleness_us = args.staleness_us;
  opts.slave.max_increment_m = args.max_increment;
  opts.slave.workspace_half_extent_m = args.workspace_half;
  opts.rates.semg_period_us = args.semg_period_us;
  opts.rates.imu_period_us = args.imu_period_us;
  opts.rates.receive_period_us = args.receive_period_us;
  opts.rates.control_period_us = args.control_period_us;
  opts.initial_pose.p = parse_vec3(args.init_pose);

  if (!args.model_path.empty()) {
    const auto [model, feat] =
        teleop::model_from_json(teleop::read_file(args.model_path));
    opts.model = model;
    opts.master.features = feat;
  }
  return opts;
}

std::string grip_csv(const std::vector<teleop::GripCommand>& grips) {
  std::ostringstream out;
  out << "t_us,state\n";
  for (const teleop::GripCommand& g : grips) {
    out << g.t_us << ',' << g.state << "\n";
  }
  return out.str();
}

void write_effective_config(const PipelineArgs& args, const std::string& out_dir) {
  teleop::atomic_write_file(out_dir + "/effective_config.toml",
                            effective_config(args));
}

// --------------------------------------------------------------------------
// run-sim
// --------------------------------------------------------------------------

struct RunSimArgs {
  std::string scenario;
  std::string out_dir;
  PipelineArgs pipeline;
};

int run_run_sim(CLI::App* cmd, RunSimArgs& args) {
  apply_config_file(cmd, &args.pipeline);
  const teleop::SensorLog log =
      teleop::sensor_log_from_jsonl(teleop::read_file(args.scenario));
  const teleop::SimOptions opts = make_sim_options(args.pipeline);

  const teleop::SimResult result = teleop::run_simulation(log, opts);

  namespace fs = std::filesystem;
  fs::create_directories(args.out_dir);
  teleop::atomic_write_file(args.out_dir + "/robot.csv",
                            teleop::trajectory_to_csv(result.commanded));
  teleop::atomic_write_file(args.out_dir + "/human.csv",
                            teleop::trajectory_to_csv(result.human));
  teleop::atomic_write_file(args.out_dir + "/human_filtered.csv",
                            teleop::trajectory_to_csv(result.human_filtered));
  teleop::atomic_write_file(args.out_dir + "/grip.csv",
                            grip_csv(result.grip_transitions));
  teleop::atomic_write_file(args.out_dir + "/events.jsonl", result.event_log);
  teleop::atomic_write_file(args.out_dir + "/stats.json",
                            result.stats.to_json() + "\n");
  write_effective_config(args.pipeline, args.out_dir);

  std::cout << "simulated " << result.stats.control_cycles
            << " control cycles, " << result.stats.integrations
            << " integrations, " << result.stats.dropped
            << " dropped sensor records\n";
  return 0;
}

// --------------------------------------------------------------------------
// run-live
// --------------------------------------------------------------------------

struct RunLiveArgs {
  std::string role;
  std::string addr;
  std::string scenario;
  std::string out_dir;
  double duration = 12.0;
  int connect_timeout_ms = 5000;
  int accept_timeout_ms = 10000;
  PipelineArgs pipeline;
};

int run_run_live(CLI::App* cmd, RunLiveArgs& args) {
  apply_config_file(cmd, &args.pipeline);
  teleop::LiveOptions opts;
  opts.address = args.addr;
  opts.pipeline = make_sim_options(args.pipeline);
  opts.duration_s = args.duration;
  opts.connect_timeout_ms = args.connect_timeout_ms;
  opts.accept_timeout_ms = args.accept_timeout_ms;

  namespace fs = std::filesystem;
  fs::create_directories(args.out_dir);

  teleop::LiveResult result;
  if (args.role == "host1") {
    if (args.scenario.empty()) {
      throw teleop::ScenarioInvalid("host1 needs --scenario");
    }
    const teleop::SensorLog log =
        teleop::sensor_log_from_jsonl(teleop::read_file(args.scenario));
    result = teleop::run_live_host1(log, opts);
    teleop::atomic_write_file(args.out_dir + "/human.csv",
                              teleop::trajectory_to_csv(result.human));
    teleop::atomic_write_file(args.out_dir + "/human_filtered.csv",
                              teleop::trajectory_to_csv(result.human_filtered));
  } else if (args.role == "host2") {
    result = teleop::run_live_host2(opts);
    teleop::atomic_write_file(args.out_dir + "/robot.csv",
                              teleop::trajectory_to_csv(result.commanded));
    teleop::atomic_write_file(args.out_dir + "/grip.csv",
                              grip_csv(result.grip_transitions));
  } else {
    throw teleop::ScenarioInvalid("--role must be host1 or host2");
  }

  nlohmann::ordered_json extra = nlohmann::ordered_json::parse(result.stats.to_json());
  extra["peer_disconnected"] = result.peer_disconnected;
  teleop::atomic_write_file(args.out_dir + "/stats.json", extra.dump(2) + "\n");
  write_effective_config(args.pipeline, args.out_dir);

  std::cout << args.role << " finished"
            << (result.peer_disconnected ? " (peer disconnected)" : "") << "\n";
  return 0;
}

// --------------------------------------------------------------------------
// eval
// --------------------------------------------------------------------------

struct EvalArgs {
  std::string human;
  std::string robot;
  std::string report;
  std::string shape;
  std::uint64_t tol_us = 2000;
  std::uint64_t skip_us = 0;
};

int run_eval(const EvalArgs& args) {
  teleop::Trajectory human =
      teleop::trajectory_from_csv(teleop::read_file(args.human));
  const teleop::Trajectory robot =
      teleop::trajectory_from_csv(teleop::read_file(args.robot));

  if (args.skip_us > 0) {
    std::erase_if(human.samples, [&](const teleop::TrajectorySample& s) {
      return s.t_us < args.skip_us;
    });
    if (human.samples.empty()) {
      throw teleop::ScenarioInvalid("--skip-us removed every human sample");
    }
  }

  const teleop::MetricsReport metrics =
      teleop::evaluate_trajectories(human, robot, args.tol_us);

  nlohmann::ordered_json report;
  report["shape"] = args.shape.empty() ? nlohmann::ordered_json(nullptr)
                                       : nlohmann::ordered_json(args.shape);
  const char* axis_names[3] = {"x", "y", "z"};
  nlohmann::ordered_json axes;
  for (int i = 0; i < 3; ++i) {
    axes[axis_names[i]] = {{"rmse", metrics.axes[i].rmse},
                           {"mae", metrics.axes[i].mae}};
  }
  report["axes"] = axes;
  report["paired_samples"] = metrics.paired;
  report["unpaired_samples"] = metrics.unpaired;
  report["tol_us"] = args.tol_us;

  const std::string text = report.dump(2) + "\n";
  if (!args.report.empty()) {
    teleop::atomic_write_file(args.report, text);
  }
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wearable-IMU/sEMG Cartesian teleoperation toolkit"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "generate a synthetic sensor log, ground truth, and datasets");
  synth->add_option("--shape", synth_args.shape,
                    "square|triangle|circle|pentagram");
  synth->add_option("--size", synth_args.size, "shape size (m)");
  synth->add_option("--duration", synth_args.duration, "traversal time (s)")
      ->check(CLI::PositiveNumber);
  synth->add_option("--center", synth_args.center, "shape center x,y,z (m)");
  synth->add_option("--noise-deg", synth_args.noise_deg,
                    "quaternion noise sigma (degrees)");
  synth->add_option("--arm-upper", synth_args.arm_upper, "upper arm length (m)");
  synth->add_option("--arm-forearm", synth_args.arm_forearm, "forearm length (m)");
  synth->add_option("--seed", synth_args.seed, "noise seed");
  synth->add_option("--out-log", synth_args.out_log, "sensor log output (JSONL)");
  synth->add_option("--out-truth", synth_args.out_truth,
                    "ground-truth trajectory output (CSV)");
  synth->add_option("--semg", synth_args.semg_profile,
                    "also emit sEMG frames: relaxed|contracted");
  synth->add_option("--semg-amplitude", synth_args.semg_amplitude,
                    "sEMG noise amplitude override");
  synth->add_option("--semg-dataset", synth_args.semg_dataset,
                    "labeled training dataset output (JSONL)");
  synth->add_option("--windows-per-class", synth_args.windows_per_class,
                    "dataset windows per class");
  synth->add_option("--window-len", synth_args.window_len, "samples per window");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train the grip classifier");
  train->add_option("--data", train_args.data, "labeled dataset (JSONL)")
      ->required();
  train->add_option("--model-out", train_args.model_out, "model output (JSON)")
      ->required();
  train->add_option("--report", train_args.report, "training report (JSON)");
  train->add_option("--window-len", train_args.window_len, "samples per window");
  train->add_option("--hop", train_args.hop, "windower hop");
  train->add_option("--epochs", train_args.epochs, "training epochs")
      ->check(CLI::PositiveNumber);
  train->add_option("--lr", train_args.lr, "learning rate");
  train->add_option("--l2", train_args.l2, "L2 penalty");
  train->add_option("--val-split", train_args.val_split, "held-out fraction")
      ->check(CLI::Range(0.0, 0.9));
  train->add_option("--seed", train_args.seed, "shuffle seed");

  RunSimArgs sim_args;
  CLI::App* run_sim = app.add_subcommand(
      "run-sim", "deterministic simulation of the two-host pipeline");
  run_sim->add_option("--scenario", sim_args.scenario, "sensor log (JSONL)")
      ->required();
  run_sim->add_option("--out-dir", sim_args.out_dir, "output directory")
      ->required();
  add_pipeline_flags(run_sim, &sim_args.pipeline);

  RunLiveArgs live_args;
  CLI::App* run_live = app.add_subcommand(
      "run-live", "run one host of the live TCP pipeline");
  run_live->add_option("--role", live_args.role, "host1|host2")->required();
  run_live->add_option("--addr", live_args.addr, "host:port")->required();
  run_live->add_option("--scenario", live_args.scenario,
                       "sensor log to replay (host1)");
  run_live->add_option("--out-dir", live_args.out_dir, "output directory")
      ->required();
  run_live->add_option("--duration", live_args.duration,
                       "host2 session length (s)");
  run_live->add_option("--connect-timeout-ms", live_args.connect_timeout_ms,
                       "host1 connect retry budget");
  run_live->add_option("--accept-timeout-ms", live_args.accept_timeout_ms,
                       "host2 accept wait budget");
  add_pipeline_flags(run_live, &live_args.pipeline);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "compare human and robot trajectories (per-axis RMSE/MAE)");
  eval->add_option("--human", eval_args.human, "reference trajectory CSV")
      ->required();
  eval->add_option("--robot", eval_args.robot, "commanded trajectory CSV")
      ->required();
  eval->add_option("--report", eval_args.report, "report output (JSON)");
  eval->add_option("--shape", eval_args.shape, "shape label for the report");
  eval->add_option("--tol-us", eval_args.tol_us, "pairing tolerance");
  eval->add_option("--skip-us", eval_args.skip_us,
                   "ignore human samples before this time (filter warm-up)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    nlohmann::ordered_json j;
    j["error"] = {{"type", "usage"}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 2;
  }

  try {
    if (synth->parsed()) {
      return run_synth(synth_args);
    }
    if (train->parsed()) {
      return run_train(train_args);
    }
    if (run_sim->parsed()) {
      return run_run_sim(run_sim, sim_args);
    }
    if (run_live->parsed()) {
      return run_run_live(run_live, live_args);
    }
    if (eval->parsed()) {
      return run_eval(eval_args);
    }
  } catch (const std::exception& e) {
    const bool validation =
        dynamic_cast<const teleop::ScenarioInvalid*>(&e) != nullptr ||
        dynamic_cast<const teleop::IoError*>(&e) != nullptr ||
        dynamic_cast<const teleop::UnreachablePath*>(&e) != nullptr ||
        dynamic_cast<const teleop::ChannelCountMismatch*>(&e) != nullptr ||
        dynamic_cast<const teleop::SingleClassDataset*>(&e) != nullptr ||
        dynamic_cast<const teleop::NonFiniteFeature*>(&e) != nullptr ||
        dynamic_cast<const teleop::NonUnitQuaternion*>(&e) != nullptr;
    nlohmann::ordered_json j;
    j["error"] = {{"type", validation ? "validation" : "runtime"},
                  {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return validation ? 2 : 3;
  }
  return 0;
}
