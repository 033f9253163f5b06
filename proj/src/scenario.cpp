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

#include "teleop/scenario.hpp"

#include <cmath>
#include <sstream>

#include "teleop/rng.hpp"

namespace teleop {

namespace {

constexpr double kReachMargin = 1e-6;

/// Closed polyline through `corners` (in-plane 2D coordinates), traversed by
/// normalized arclength u in [0, 1).
Vec3 polyline_point(const std::vector<std::array<double, 2>>& corners, double u) {
  const std::size_t n = corners.size();
  std::vector<double> seg_len(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = corners[i];
    const auto& b = corners[(i + 1) % n];
    seg_len[i] = std::hypot(b[0] - a[0], b[1] - a[1]);
    total += seg_len[i];
  }
  if (total <= 0.0) {
    return {corners[0][0], corners[0][1], 0.0};
  }
  double s = u * total;
  for (std::size_t i = 0; i < n; ++i) {
    if (s <= seg_len[i] || i == n - 1) {
      const double f = seg_len[i] > 0.0 ? s / seg_len[i] : 0.0;
      const auto& a = corners[i];
      const auto& b = corners[(i + 1) % n];
      return {a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1]), 0.0};
    }
    s -= seg_len[i];
  }
  return {corners[0][0], corners[0][1], 0.0};
}

/// In-plane 2D point of the shape at normalized arclength u in [0, 1).
Vec3 shape_point_2d(Shape shape, double size, double u) {
  const double h = size / 2.0;
  switch (shape) {
    case Shape::square:
      return polyline_point({{-h, -h}, {h, -h}, {h, h}, {-h, h}}, u);
    case Shape::triangle: {
      // Equilateral, centroid at the origin.
      const double r = size / std::sqrt(3.0);
      std::vector<std::array<double, 2>> corners;
      for (int k = 0; k < 3; ++k) {
        const double a = M_PI / 2.0 + 2.0 * M_PI * k / 3.0;
        corners.push_back({r * std::cos(a), r * std::sin(a)});
      }
      return polyline_point(corners, u);
    }
    case Shape::circle: {
      const double a = 2.0 * M_PI * u;
      return {h * std::cos(a), h * std::sin(a), 0.0};
    }
    case Shape::pentagram: {
      // Five-pointed star: circumcircle vertices visited in skip-2 order.
      std::vector<std::array<double, 2>> corners;
      for (int k = 0; k < 5; ++k) {
        const int v = (2 * k) % 5;
        const double a = M_PI / 2.0 + 2.0 * M_PI * v / 5.0;
        corners.push_back({h * std::cos(a), h * std::sin(a)});
      }
      return polyline_point(corners, u);
    }
  }
  return {0.0, 0.0, 0.0};
}

/// Elbow-down two-link inverse kinematics for one wrist target; returns the
/// two armband quaternions whose forward kinematics hit the target exactly.
ImuSample solve_arm(const ArmModel& arm, const Vec3& wrist, std::uint64_t t_us) {
  const double r = wrist.norm();
  const double lo = std::fabs(arm.upper_m - arm.forearm_m) + kReachMargin;
  const double hi = arm.reach() - kReachMargin;
  if (r < lo || r > hi) {
    std::ostringstream msg;
    msg << "wrist target at distance " << r << " m is outside the reachable"
        << " annulus [" << lo << ", " << hi << "]";
    throw UnreachablePath(msg.str());
  }

  const Vec3 u = wrist / r;
  // Shoulder angle between the shoulder->wrist line and the upper arm.
  const double cos_alpha =
      (arm.upper_m * arm.upper_m + r * r - arm.forearm_m * arm.forearm_m) /
      (2.0 * arm.upper_m * r);
  const double alpha = std::acos(std::clamp(cos_alpha, -1.0, 1.0));

  // Arm plane normal; chosen so the elbow drops below the shoulder-wrist
  // line (elbow-down branch). Falls back when the wrist is straight up/down.
  Vec3 normal = u.cross(Vec3{0.0, 0.0, -1.0});
  if (normal.norm() < 1e-9) {
    normal = u.cross(Vec3{0.0, -1.0, 0.0});
  }
  normal = normal.normalized();

  // Rotate the shoulder->wrist direction by alpha within the arm plane.
  const Vec3 elbow_dir = u * std::cos(alpha) + normal.cross(u) * std::sin(alpha);
  const Vec3 elbow = elbow_dir * arm.upper_m;
  const Vec3 forearm_dir = (wrist - elbow) / arm.forearm_m;

  ImuSample sample;
  sample.t_us = t_us;
  sample.q_upper = Quaternion::rotation_between(Vec3{1.0, 0.0, 0.0}, elbow_dir);
  sample.q_forearm = Quaternion::rotation_between(Vec3{1.0, 0.0, 0.0}, forearm_dir);
  return sample;
}

Quaternion perturb(const Quaternion& q, double sigma_rad, Rng& rng) {
  // Random axis, Gaussian angle.
  const double gx = rng.normal(0.0, 1.0);
  const double gy = rng.normal(0.0, 1.0);
  const double gz = rng.normal(0.0, 1.0);
  const double angle = rng.normal(0.0, sigma_rad);
  Vec3 axis{gx, gy, gz};
  if (axis.norm() < 1e-12) {
    axis = {1.0, 0.0, 0.0};
  }
  return quat_mul(Quaternion::from_axis_angle(axis, angle), q);
}

}  // namespace

Shape shape_from_name(const std::string& name) {
  if (name == "square") return Shape::square;
  if (name == "triangle") return Shape::triangle;
  if (name == "circle") return Shape::circle;
  if (name == "pentagram") return Shape::pentagram;
  throw ScenarioInvalid("unknown shape '" + name +
                        "' (square|triangle|circle|pentagram)");
}

const char* shape_name(Shape s) {
  switch (s) {
    case Shape::square:
      return "square";
    case Shape::triangle:
      return "triangle";
    case Shape::circle:
      return "circle";
    case Shape::pentagram:
      return "pentagram";
  }
  return "unknown";
}

void ShapeSpec::validate() const {
  if (size_m < 0.0) {
    throw ScenarioInvalid("shape size must be nonnegative");
  }
  if (duration_s <= 0.0) {
    throw ScenarioInvalid("duration must be positive");
  }
  if (imu_rate_hz <= 0.0) {
    throw ScenarioInvalid("IMU rate must be positive");
  }
  if (quat_noise_rad < 0.0) {
    throw ScenarioInvalid("quaternion noise must be nonnegative");
  }
}

ShapeScenario gen_shape(const ShapeSpec& spec, const ArmModel& arm) {
  spec.validate();

  const std::uint64_t period_us =
      static_cast<std::uint64_t>(std::llround(1e6 / spec.imu_rate_hz));
  const std::size_t samples =
      static_cast<std::size_t>(spec.duration_s * spec.imu_rate_hz) + 1;

  Rng rng(spec.seed);
  ShapeScenario out;
  out.log.imu.reserve(samples);
  out.truth.samples.reserve(samples);

  for (std::size_t k = 0; k < samples; ++k) {
    const double u = static_cast<double>(k) / (spec.imu_rate_hz * spec.duration_s);
    const Vec3 flat = shape_point_2d(spec.shape, spec.size_m, u - std::floor(u));
    // In-plane x -> shoulder X, in-plane y -> shoulder Z (vertical drawing).
    const Vec3 offset = spec.plane_rotation.rotate(Vec3{flat.x, 0.0, flat.y});
    const Vec3 wrist = spec.center + offset;

    const std::uint64_t t_us = static_cast<std::uint64_t>(k) * period_us;
    ImuSample sample = solve_arm(arm, wrist, t_us);
    out.truth.samples.push_back(TrajectorySample{t_us, wrist, sample.q_forearm});

    if (spec.quat_noise_rad > 0.0) {
      sample.q_upper = perturb(sample.q_upper, spec.quat_noise_rad, rng);
      sample.q_forearm = perturb(sample.q_forearm, spec.quat_noise_rad, rng);
    }
    out.log.imu.push_back(sample);
  }
  return out;
}

SemgProfile semg_profile_from_name(const std::string& name) {
  if (name == "relaxed") return SemgProfile::relaxed;
  if (name == "contracted") return SemgProfile::contracted;
  throw ScenarioInvalid("unknown sEMG profile '" + name +
                        "' (relaxed|contracted)");
}

double semg_profile_amplitude(SemgProfile profile) {
  return profile == SemgProfile::relaxed ? 5.0 : 50.0;
}

std::vector<SemgFrame> gen_semg(const SemgSpec& spec) {
  if (spec.duration_s <= 0.0) {
    throw ScenarioInvalid("sEMG duration must be positive");
  }
  const double amplitude =
      spec.amplitude >= 0.0 ? spec.amplitude : semg_profile_amplitude(spec.profile);
  const std::uint64_t period_us =
      static_cast<std::uint64_t>(std::llround(1e6 / spec.rate_hz));
  const std::size_t n = static_cast<std::size_t>(spec.duration_s * spec.rate_hz);

  Rng rng(spec.seed);
  std::vector<SemgFrame> frames(n);
  for (std::size_t k = 0; k < n; ++k) {
    frames[k].t_us = spec.start_us + static_cast<std::uint64_t>(k) * period_us;
    for (std::size_t c = 0; c < kSemgChannels; ++c) {
      frames[k].ch[c] =
          static_cast<double>(std::llround(rng.normal(0.0, amplitude)));
    }
  }
  return frames;
}

std::string gen_semg_dataset_jsonl(std::size_t windows_per_class,
                                   std::size_t window_len, std::uint64_t seed) {
  std::ostringstream out;
  for (int label = 0; label <= 1; ++label) {
    SemgSpec spec;
    spec.profile = label == 0 ? SemgProfile::relaxed : SemgProfile::contracted;
    spec.rate_hz = 200.0;
    spec.duration_s =
        static_cast<double>(windows_per_class * window_len) / spec.rate_hz;
    spec.seed = seed + static_cast<std::uint64_t>(label);
    const std::vector<SemgFrame> frames = gen_semg(spec);
    for (std::size_t w = 0; w + window_len <= frames.size(); w += window_len) {
      out << dataset_window_to_jsonl_line(
                 label, std::span<const SemgFrame>(frames).subspan(w, window_len))
          << "\n";
    }
  }
  return out.str();
}

}  // namespace teleop
