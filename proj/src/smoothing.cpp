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

#include "teleop/smoothing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace teleop {

namespace {

using Mat4 = std::array<std::array<double, 4>, 4>;
using Vec4 = std::array<double, 4>;

// Cyclic Jacobi eigen-decomposition of a symmetric 4x4 matrix.
// Eigenvalues land on the diagonal of `a`; `v` accumulates eigenvectors as
// columns. Plenty accurate for the well-conditioned PSD matrices built from
// unit quaternions.
void jacobi_eigen_sym4(Mat4& a, Mat4& v) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      v[i][j] = (i == j) ? 1.0 : 0.0;
    }
  }
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        off += a[p][q] * a[p][q];
      }
    }
    if (off < 1e-30) {
      break;
    }
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) {
          continue;
        }
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 4; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 4; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 4; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

Vec4 components(const Quaternion& q) {
  return {q.eta(), q.x(), q.y(), q.z()};
}

}  // namespace

SmootherConfig::SmootherConfig(std::size_t n) : window(n) {
  if (n < 1) {
    throw Error("smoother window must be at least 1");
  }
}

Vec3 avg_position(std::span<const Vec3> window) {
  if (window.empty()) {
    throw EmptyWindow("avg_position: empty window");
  }
  Vec3 sum;
  for (const Vec3& dp : window) {
    sum += dp;
  }
  return sum / static_cast<double>(window.size());
}

Quaternion avg_quaternion(std::span<const Quaternion> window, bool* degenerate) {
  if (degenerate != nullptr) {
    *degenerate = false;
  }
  if (window.empty()) {
    throw EmptyWindow("avg_quaternion: empty window");
  }

  // Sign-align all representatives to the first element.
  std::vector<Vec4> aligned;
  aligned.reserve(window.size());
  const Vec4 ref = components(window.front());
  for (const Quaternion& q : window) {
    Vec4 c = components(q);
    const double d = c[0] * ref[0] + c[1] * ref[1] + c[2] * ref[2] + c[3] * ref[3];
    if (d < 0.0) {
      for (double& x : c) {
        x = -x;
      }
    }
    aligned.push_back(c);
  }

  // Accumulate M*M^T and take its leading eigenvector: the principal
  // singular direction of the stacked 4xN quaternion matrix.
  Mat4 s{};
  for (const Vec4& c : aligned) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        s[i][j] += c[i] * c[j];
      }
    }
  }
  Mat4 vecs;
  jacobi_eigen_sym4(s, vecs);

  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(),
            [&s](int a, int b) { return s[a][a] > s[b][b]; });
  const int best = order[0];
  const double sigma1 = std::sqrt(std::max(0.0, s[best][best]));
  const double sigma2 = std::sqrt(std::max(0.0, s[order[1]][order[1]]));

  Vec4 u;
  if (sigma1 - sigma2 < 1e-12) {
    // Ambiguous principal direction; fall back to the aligned arithmetic mean.
    if (degenerate != nullptr) {
      *degenerate = true;
    }
    u = {0.0, 0.0, 0.0, 0.0};
    for (const Vec4& c : aligned) {
      for (int i = 0; i < 4; ++i) {
        u[i] += c[i];
      }
    }
    const double n = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]);
    if (n < 1e-12) {
      // Fully cancelling window; keep the first representative.
      u = ref;
    }
  } else {
    for (int i = 0; i < 4; ++i) {
      u[i] = vecs[i][best];
    }
  }

  Quaternion mean = renormalized(u[0], u[1], u[2], u[3]);
  if (mean.dot(window.back()) < 0.0) {
    mean = mean.negated();
  }
  return mean;
}

RobotPose apply_pose_update(const RobotPose& pose, const Vec3& dp_avg,
                            const Quaternion& dq_avg) {
  RobotPose next;
  next.p = pose.p + dp_avg;
  next.q = quat_mul(dq_avg, pose.q);
  return next;
}

IncrementSmoother::IncrementSmoother(SmootherConfig config) : config_(config) {
  if (config_.window < 1) {
    throw Error("smoother window must be at least 1");
  }
}

void IncrementSmoother::push(const Vec3& dp, const Quaternion& dq) {
  dp_.push_back(dp);
  dq_.push_back(dq);
  while (dp_.size() > config_.window) {
    dp_.pop_front();
    dq_.pop_front();
  }
}

void IncrementSmoother::reset() {
  dp_.clear();
  dq_.clear();
}

Vec3 IncrementSmoother::smoothed_position() const {
  std::vector<Vec3> w(dp_.begin(), dp_.end());
  return avg_position(w);
}

Quaternion IncrementSmoother::smoothed_rotation(bool* degenerate) const {
  std::vector<Quaternion> w(dq_.begin(), dq_.end());
  return avg_quaternion(w, degenerate);
}

}  // namespace teleop
