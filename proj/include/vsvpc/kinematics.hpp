// Copyright 2026 The vsvpc Authors
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

#pragma once

#include <array>
#include <cstdint>

#include "vsvpc/core.hpp"

namespace vsvpc {

// Standard (distal) Denavit-Hartenberg convention throughout:
//   A_i = Rz(theta0_i + q_i) * Tz(d_i) * Tx(a_i) * Rx(alpha_i)
struct DHRow {
  double a = 0.0;       // link length [m]
  double alpha = 0.0;   // link twist [rad]
  double d = 0.0;       // link offset [m]
  double theta0 = 0.0;  // joint angle offset [rad]
};

struct RobotModel {
  std::array<DHRow, 6> dh;
  Vec6 joint_min = Vec6::Constant(-2.967);
  Vec6 joint_max = Vec6::Constant(2.967);
  Vec6 joint_vel_min = Vec6::Constant(-1.0);
  Vec6 joint_vel_max = Vec6::Constant(1.0);

  void validate() const {
    for (const auto& row : dh) {
      require(std::isfinite(row.a) && std::isfinite(row.alpha) &&
                  std::isfinite(row.d) && std::isfinite(row.theta0),
              "RobotModel: non-finite DH entry");
    }
    require((joint_min.array() < joint_max.array()).all(),
            "RobotModel: joint_min must be < joint_max");
    require((joint_vel_min.array() < joint_vel_max.array()).all(),
            "RobotModel: joint_vel_min must be < joint_vel_max");
  }
};

struct JointState {
  Vec6 q = Vec6::Zero();
};

// 4x4 homogeneous transform, rotation block orthonormal.
struct Pose {
  Mat4 T = Mat4::Identity();

  Mat3 rotation() const { return T.block<3, 3>(0, 0); }
  Vec3 translation() const { return T.block<3, 1>(0, 3); }
};

inline Mat4 dh_transform(const DHRow& row, double q) {
  const double ct = std::cos(row.theta0 + q);
  const double st = std::sin(row.theta0 + q);
  const double ca = std::cos(row.alpha);
  const double sa = std::sin(row.alpha);
  Mat4 A;
  A << ct, -st * ca, st * sa, row.a * ct,  //
      st, ct * ca, -ct * sa, row.a * st,   //
      0.0, sa, ca, row.d,                  //
      0.0, 0.0, 0.0, 1.0;
  return A;
}

/// TCP pose in the base frame: product of the six per-joint DH transforms.
inline Pose forward_kinematics(const RobotModel& model, const JointState& q) {
  require(all_finite(q.q), "forward_kinematics: non-finite joint state");
  Pose pose;
  for (int i = 0; i < 6; ++i) {
    pose.T = pose.T * dh_transform(model.dh[static_cast<std::size_t>(i)], q.q[i]);
  }
  return pose;
}

/// Geometric Jacobian J_r mapping joint velocities to the stacked TCP
/// velocity [v; w], both expressed in the base frame. All joints revolute:
/// column i is [z_{i-1} x (p - p_{i-1}); z_{i-1}].
inline Mat6 geometric_jacobian(const RobotModel& model, const JointState& q) {
  require(all_finite(q.q), "geometric_jacobian: non-finite joint state");
  std::array<Vec3, 7> origins;
  std::array<Vec3, 7> axes;
  Mat4 T = Mat4::Identity();
  origins[0] = Vec3::Zero();
  axes[0] = Vec3::UnitZ();
  for (int i = 0; i < 6; ++i) {
    T = T * dh_transform(model.dh[static_cast<std::size_t>(i)], q.q[i]);
    origins[static_cast<std::size_t>(i + 1)] = T.block<3, 1>(0, 3);
    axes[static_cast<std::size_t>(i + 1)] = T.block<3, 1>(0, 2);
  }
  const Vec3 p_tcp = origins[6];
  Mat6 J;
  for (int i = 0; i < 6; ++i) {
    const Vec3& z = axes[static_cast<std::size_t>(i)];
    const Vec3& p = origins[static_cast<std::size_t>(i)];
    J.block<3, 1>(0, i) = z.cross(p_tcp - p);
    J.block<3, 1>(3, i) = z;
  }
  return J;
}

/// Scales every nonzero DH field by (1 + u), u ~ U[-fraction, +fraction].
/// Zero fields stay zero (a draw is consumed only for nonzero fields);
/// joint limits are untouched. Deterministic for a fixed seed.
inline RobotModel perturb_dh(const RobotModel& model, double fraction,
                             std::uint64_t seed) {
  require(std::isfinite(fraction) && fraction >= 0.0 && fraction < 1.0,
          "perturb_dh: fraction must be in [0, 1)");
  RobotModel out = model;
  Rng rng(seed);
  for (auto& row : out.dh) {
    for (double* field : {&row.a, &row.alpha, &row.d, &row.theta0}) {
      if (*field != 0.0) {
        *field *= 1.0 + rng.uniform(-fraction, fraction);
      }
    }
  }
  return out;
}

}  // namespace vsvpc
