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

#ifndef ARMTELEOP_MATH_HPP_
#define ARMTELEOP_MATH_HPP_

#include <array>
#include <cmath>

#include "teleop/errors.hpp"

namespace teleop {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double px, double py, double pz) : x(px), y(py), z(pz) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const;

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// 3x3 rotation matrix, row-major.
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static Mat3 identity();

  Vec3 operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  Mat3 operator*(const Mat3& o) const;
  Mat3 transposed() const;
  double det() const;

  double operator()(int r, int c) const { return m[r][c]; }
};

/// Unit quaternion, scalar-first storage: {eta, eps_x, eps_y, eps_z}.
///
/// Construction normalizes inputs whose norm deviates from 1 by at most
/// 1e-6 and rejects anything further off as corrupt sensor data.
class Quaternion {
 public:
  /// Identity rotation.
  Quaternion() : eta_(1.0), eps_{} {}

  /// Validating constructor; throws NonUnitQuaternion if |norm - 1| > 1e-6.
  Quaternion(double eta, double ex, double ey, double ez);
  Quaternion(double eta, const Vec3& eps) : Quaternion(eta, eps.x, eps.y, eps.z) {}

  static Quaternion identity() { return Quaternion(); }
  static Quaternion from_axis_angle(const Vec3& axis, double angle_rad);
  /// Shortest rotation carrying unit vector `from` onto unit vector `to`.
  static Quaternion rotation_between(const Vec3& from, const Vec3& to);

  double eta() const { return eta_; }
  const Vec3& eps() const { return eps_; }
  double x() const { return eps_.x; }
  double y() const { return eps_.y; }
  double z() const { return eps_.z; }

  double norm() const {
    return std::sqrt(eta_ * eta_ + eps_.dot(eps_));
  }

  /// Conjugate; equals the inverse for unit quaternions.
  Quaternion inverse() const;

  Quaternion negated() const;

  /// 4-vector dot product (eta*eta' + eps.eps').
  double dot(const Quaternion& o) const {
    return eta_ * o.eta_ + eps_.dot(o.eps_);
  }

  /// Rotation angle in [0, pi], insensitive to the sign of the representative.
  double angle() const { return 2.0 * std::atan2(eps_.norm(), std::fabs(eta_)); }

  Vec3 rotate(const Vec3& v) const;

 private:
  struct Unchecked {};
  Quaternion(Unchecked, double eta, double ex, double ey, double ez)
      : eta_(eta), eps_{ex, ey, ez} {}

  friend Quaternion quat_mul(const Quaternion&, const Quaternion&);
  friend Quaternion renormalized(double, double, double, double);

  double eta_;
  Vec3 eps_;
};

/// Rebuild a unit quaternion from (possibly drifted) components without the
/// construction tolerance check. Intended for averaging/integration output.
Quaternion renormalized(double eta, double ex, double ey, double ez);

/// Rotation matrix of a unit quaternion.
Mat3 quat_to_rotmat(const Quaternion& q);

/// Hamilton product a (x) b, renormalized.
Quaternion quat_mul(const Quaternion& a, const Quaternion& b);

/// Inverse (conjugate) of a unit quaternion.
Quaternion quat_inverse(const Quaternion& q);

/// Angle of the relative rotation between two unit quaternions, in [0, pi].
double quat_angle_between(const Quaternion& a, const Quaternion& b);

}  // namespace teleop

#endif  // ARMTELEOP_MATH_HPP_
