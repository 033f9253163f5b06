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

#include "teleop/math.hpp"

#include <algorithm>

namespace teleop {

namespace {
constexpr double kUnitTolerance = 1e-6;
}

Vec3 Vec3::normalized() const {
  const double n = norm();
  if (n <= 0.0) {
    throw Error("cannot normalize zero vector");
  }
  return *this / n;
}

Mat3 Mat3::identity() {
  Mat3 r;
  r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
  return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) {
        s += m[i][k] * o.m[k][j];
      }
      r.m[i][j] = s;
    }
  }
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r.m[i][j] = m[j][i];
    }
  }
  return r;
}

double Mat3::det() const {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Quaternion::Quaternion(double eta, double ex, double ey, double ez)
    : eta_(eta), eps_{ex, ey, ez} {
  const double n = norm();
  if (!std::isfinite(n) || std::fabs(n - 1.0) > kUnitTolerance) {
    throw NonUnitQuaternion("quaternion norm " + std::to_string(n) +
                            " deviates from 1 by more than 1e-6");
  }
  eta_ /= n;
  eps_ = eps_ / n;
}

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double angle_rad) {
  const Vec3 a = axis.normalized();
  const double h = 0.5 * angle_rad;
  const double s = std::sin(h);
  return Quaternion(Unchecked{}, std::cos(h), a.x * s, a.y * s, a.z * s);
}

Quaternion Quaternion::rotation_between(const Vec3& from, const Vec3& to) {
  const Vec3 a = from.normalized();
  const Vec3 b = to.normalized();
  const double c = a.dot(b);
  if (c < -1.0 + 1e-12) {
    // Antiparallel: any axis perpendicular to `a` gives a 180-degree turn.
    Vec3 perp = a.cross(Vec3{1.0, 0.0, 0.0});
    if (perp.norm() < 1e-9) {
      perp = a.cross(Vec3{0.0, 1.0, 0.0});
    }
    return from_axis_angle(perp, M_PI);
  }
  // Half-angle construction: normalize {1 + a.b, a x b}.
  const Vec3 axis = a.cross(b);
  return renormalized(1.0 + c, axis.x, axis.y, axis.z);
}

Quaternion Quaternion::inverse() const {
  return Quaternion(Unchecked{}, eta_, -eps_.x, -eps_.y, -eps_.z);
}

Quaternion Quaternion::negated() const {
  return Quaternion(Unchecked{}, -eta_, -eps_.x, -eps_.y, -eps_.z);
}

Vec3 Quaternion::rotate(const Vec3& v) const {
  // v' = v + 2*eps x (eps x v + eta*v)
  const Vec3 t = eps_.cross(v) + v * eta_;
  return v + 2.0 * eps_.cross(t);
}

Quaternion renormalized(double eta, double ex, double ey, double ez) {
  const double n = std::sqrt(eta * eta + ex * ex + ey * ey + ez * ez);
  if (!std::isfinite(n) || n <= 0.0) {
    throw NonUnitQuaternion("cannot renormalize degenerate quaternion");
  }
  return Quaternion(Quaternion::Unchecked{}, eta / n, ex / n, ey / n, ez / n);
}

Mat3 quat_to_rotmat(const Quaternion& q) {
  const double eta = q.eta();
  const double ex = q.x();
  const double ey = q.y();
  const double ez = q.z();

  Mat3 r;
  r.m[0][0] = 1.0 - 2.0 * (ey * ey + ez * ez);
  r.m[0][1] = 2.0 * (ex * ey - ez * eta);
  r.m[0][2] = 2.0 * (ex * ez + ey * eta);
  r.m[1][0] = 2.0 * (ex * ey + ez * eta);
  r.m[1][1] = 1.0 - 2.0 * (ex * ex + ez * ez);
  r.m[1][2] = 2.0 * (ey * ez - ex * eta);
  r.m[2][0] = 2.0 * (ex * ez - ey * eta);
  r.m[2][1] = 2.0 * (ey * ez + ex * eta);
  r.m[2][2] = 1.0 - 2.0 * (ex * ex + ey * ey);
  return r;
}

Quaternion quat_mul(const Quaternion& a, const Quaternion& b) {
  const double eta = a.eta() * b.eta() - a.eps().dot(b.eps());
  const Vec3 eps = a.eta() * b.eps() + b.eta() * a.eps() + a.eps().cross(b.eps());
  return renormalized(eta, eps.x, eps.y, eps.z);
}

Quaternion quat_inverse(const Quaternion& q) { return q.inverse(); }

double quat_angle_between(const Quaternion& a, const Quaternion& b) {
  const double d = std::min(1.0, std::fabs(a.dot(b)));
  return 2.0 * std::acos(d);
}

}  // namespace teleop
