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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace teleop {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (!line.empty()) {
      lines.push_back(line);
    }
  }
  return lines;
}

}  // namespace

std::string sensor_log_to_jsonl(const SensorLog& log) {
  std::ostringstream out;
  // Merge the two streams in time order, IMU first on ties; within an IMU
  // sample the upper record precedes the forearm record.
  std::size_t i = 0;
  std::size_t e = 0;
  auto emit_imu = [&out](const ImuSample& s) {
    nlohmann::ordered_json ju;
    ju["t_us"] = s.t_us;
    ju["dev"] = "upper";
    ju["q"] = {s.q_upper.eta(), s.q_upper.x(), s.q_upper.y(), s.q_upper.z()};
    out << ju.dump() << "\n";
    nlohmann::ordered_json jf;
    jf["t_us"] = s.t_us;
    jf["dev"] = "forearm";
    jf["q"] = {s.q_forearm.eta(), s.q_forearm.x(), s.q_forearm.y(),
               s.q_forearm.z()};
    out << jf.dump() << "\n";
  };
  auto emit_semg = [&out](const SemgFrame& f) {
    nlohmann::ordered_json j;
    j["t_us"] = f.t_us;
    j["dev"] = "forearm";
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (double v : f.ch) {
      arr.push_back(static_cast<long long>(std::llround(v)));
    }
    j["emg"] = arr;
    out << j.dump() << "\n";
  };
  while (i < log.imu.size() || e < log.semg.size()) {
    const bool imu_next =
        e >= log.semg.size() ||
        (i < log.imu.size() && log.imu[i].t_us <= log.semg[e].t_us);
    if (imu_next) {
      emit_imu(log.imu[i++]);
    } else {
      emit_semg(log.semg[e++]);
    }
  }
  return out.str();
}

SensorLog sensor_log_from_jsonl(const std::string& text) {
  SensorLog log;
  struct PendingImu {
    std::uint64_t t_us;
    std::optional<Quaternion> upper;
    std::optional<Quaternion> forearm;
  };
  std::optional<PendingImu> pending;
  std::uint64_t last_imu_t = 0;
  std::uint64_t last_semg_t = 0;
  bool have_imu_t = false;
  bool have_semg_t = false;

  auto flush_pending = [&]() {
    if (!pending.has_value()) {
      return;
    }
    if (!pending->upper.has_value() || !pending->forearm.has_value()) {
      throw ScenarioInvalid("IMU record at t_us=" +
                            std::to_string(pending->t_us) +
                            " is missing one armband");
    }
    log.imu.push_back(ImuSample{pending->t_us, *pending->upper, *pending->forearm});
    pending.reset();
  };

  std::size_t lineno = 0;
  for (const std::string& line : split_lines(text)) {
    ++lineno;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw ScenarioInvalid("sensor log line " + std::to_string(lineno) +
                            " is not valid JSON: " + ex.what());
    }
    try {
      const std::uint64_t t = j.at("t_us").get<std::uint64_t>();
      const std::string dev = j.at("dev").get<std::string>();
      if (j.contains("q")) {
        if (dev != "upper" && dev != "forearm") {
          throw ScenarioInvalid("unknown device '" + dev + "' on line " +
                                std::to_string(lineno));
        }
        if (have_imu_t && t < last_imu_t) {
          throw ScenarioInvalid("IMU timestamps go backwards on line " +
                                std::to_string(lineno));
        }
        const auto& q = j["q"];
        if (q.size() != 4) {
          throw ScenarioInvalid("quaternion needs 4 components on line " +
                                std::to_string(lineno));
        }
        Quaternion quat(q[0].get<double>(), q[1].get<double>(),
                        q[2].get<double>(), q[3].get<double>());
        if (!pending.has_value() || pending->t_us != t) {
          flush_pending();
          pending = PendingImu{t, std::nullopt, std::nullopt};
        }
        if (dev == "upper") {
          pending->upper = quat;
        } else {
          pending->forearm = quat;
        }
        last_imu_t = t;
        have_imu_t = true;
      } else if (j.contains("emg")) {
        if (have_semg_t && t < last_semg_t) {
          throw ScenarioInvalid("sEMG timestamps go backwards on line " +
                                std::to_string(lineno));
        }
        const auto& emg = j["emg"];
        if (emg.size() != kSemgChannels) {
          throw ChannelCountMismatch("sEMG record needs 8 channels on line " +
                                     std::to_string(lineno));
        }
        SemgFrame f;
        f.t_us = t;
        for (std::size_t c = 0; c < kSemgChannels; ++c) {
          f.ch[c] = emg[c].get<double>();
          if (!std::isfinite(f.ch[c])) {
            throw ScenarioInvalid("non-finite sEMG value on line " +
                                  std::to_string(lineno));
          }
        }
        log.semg.push_back(f);
        last_semg_t = t;
        have_semg_t = true;
      } else {
        throw ScenarioInvalid("record without q or emg on line " +
                              std::to_string(lineno));
      }
    } catch (const nlohmann::json::exception& ex) {
      throw ScenarioInvalid("malformed sensor record on line " +
                            std::to_string(lineno) + ": " + ex.what());
    } catch (const NonUnitQuaternion& ex) {
      throw ScenarioInvalid("corrupt quaternion on line " +
                            std::to_string(lineno) + ": " + ex.what());
    }
  }
  flush_pending();
  return log;
}

std::string trajectory_to_csv(const Trajectory& t) {
  const bool with_q =
      !t.samples.empty() && t.samples.front().q.has_value();
  std::ostringstream out;
  out << (with_q ? "t_us,x,y,z,qw,qx,qy,qz" : "t_us,x,y,z") << "\n";
  for (const TrajectorySample& s : t.samples) {
    out << s.t_us << ',' << format_double(s.p.x) << ',' << format_double(s.p.y)
        << ',' << format_double(s.p.z);
    if (with_q) {
      const Quaternion& q = s.q.has_value() ? *s.q : Quaternion::identity();
      out << ',' << format_double(q.eta()) << ',' << format_double(q.x()) << ','
          << format_double(q.y()) << ',' << format_double(q.z());
    }
    out << "\n";
  }
  return out.str();
}

Trajectory trajectory_from_csv(const std::string& text) {
  Trajectory t;
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) {
    throw IoError("trajectory file is empty");
  }
  bool with_q = false;
  if (lines[0] == "t_us,x,y,z,qw,qx,qy,qz") {
    with_q = true;
  } else if (lines[0] != "t_us,x,y,z") {
    throw IoError("unrecognized trajectory header: " + lines[0]);
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(lines[i]);
    while (std::getline(ls, field, ',')) {
      fields.push_back(field);
    }
    const std::size_t expected = with_q ? 8 : 4;
    if (fields.size() != expected) {
      throw IoError("trajectory line " + std::to_string(i + 1) + " has " +
                    std::to_string(fields.size()) + " fields, expected " +
                    std::to_string(expected));
    }
    try {
      TrajectorySample s;
      s.t_us = std::stoull(fields[0]);
      s.p = {std::stod(fields[1]), std::stod(fields[2]), std::stod(fields[3])};
      if (with_q) {
        s.q = Quaternion(std::stod(fields[4]), std::stod(fields[5]),
                         std::stod(fields[6]), std::stod(fields[7]));
      }
      t.samples.push_back(s);
    } catch (const std::exception& ex) {
      throw IoError("bad trajectory line " + std::to_string(i + 1) + ": " +
                    ex.what());
    }
  }
  t.validate();
  return t;
}

std::vector<LabeledWindow> dataset_from_jsonl(const std::string& text,
                                              std::size_t window_len) {
  std::vector<LabeledWindow> dataset;
  std::size_t lineno = 0;
  for (const std::string& line : split_lines(text)) {
    ++lineno;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw IoError("dataset line " + std::to_string(lineno) +
                    " is not valid JSON: " + ex.what());
    }
    try {
      LabeledWindow sample;
      sample.label = j.at("label").get<int>() != 0 ? 1 : 0;
      const auto& rows = j.at("emg");
      if (rows.size() != window_len) {
        throw IoError("dataset line " + std::to_string(lineno) + " has " +
                      std::to_string(rows.size()) + " samples, expected " +
                      std::to_string(window_len));
      }
      std::vector<SemgFrame> window(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != kSemgChannels) {
          throw ChannelCountMismatch("dataset line " + std::to_string(lineno) +
                                     " row " + std::to_string(r) +
                                     " does not have 8 channels");
        }
        for (std::size_t c = 0; c < kSemgChannels; ++c) {
          window[r].ch[c] = rows[r][c].get<double>();
        }
      }
      sample.x = build_feature_vector(window);
      dataset.push_back(sample);
    } catch (const nlohmann::json::exception& ex) {
      throw IoError("malformed dataset line " + std::to_string(lineno) + ": " +
                    ex.what());
    }
  }
  return dataset;
}

std::string dataset_window_to_jsonl_line(int label,
                                         std::span<const SemgFrame> window) {
  nlohmann::ordered_json j;
  j["label"] = label != 0 ? 1 : 0;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const SemgFrame& f : window) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (double v : f.ch) {
      row.push_back(static_cast<long long>(std::llround(v)));
    }
    rows.push_back(row);
  }
  j["emg"] = rows;
  return j.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot create " + tmp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      throw IoError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    throw IoError("failed renaming " + tmp.string() + " to " + path + ": " +
                  ec.message());
  }
}

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t");
  const std::size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos) {
    return "";
  }
  return s.substr(a, b - a + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::size_t lineno = 0;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') {
      continue;
    }
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw IoError("config line " + std::to_string(lineno) +
                    " is not 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw IoError("config line " + std::to_string(lineno) + " has an empty key");
    }
    kv[key] = value;
  }
  return kv;
}

std::string render_config(const std::map<std::string, std::string>& kv) {
  std::ostringstream out;
  for (const auto& [key, value] : kv) {
    out << key << " = " << value << "\n";
  }
  return out.str();
}

}  // namespace teleop
