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

#include "vsvpc/core.hpp"
#include "vsvpc/kinematics.hpp"

namespace vsvpc {

struct CameraIntrinsics {
  double fx = 600.0;  // focal length [px]
  double fy = 600.0;
  double u0 = 0.0;  // principal point [px]
  double v0 = 0.0;

  void validate() const {
    require(fx > 0.0 && fy > 0.0, "CameraIntrinsics: focal lengths must be > 0");
  }
};

struct ImageFeature {
  double u = 0.0;
  double v = 0.0;

  Vec2 vec() const { return Vec2(u, v); }
  static ImageFeature from(const Vec2& p) { return ImageFeature{p.x(), p.y()}; }
};

struct FeatureDepth {
  double d = 1.0;  // depth along the optical axis [m]
};

/// Pinhole projection of a camera-frame point.
inline ImageFeature project(const CameraIntrinsics& intr, const Vec3& p_cam) {
  require(all_finite(p_cam), "project: non-finite point");
  if (p_cam.z() <= 0.0) {
    throw BehindCameraError("project: point at or behind the camera plane");
  }
  return ImageFeature{intr.u0 + intr.fx * p_cam.x() / p_cam.z(),
                      intr.v0 + intr.fy * p_cam.y() / p_cam.z()};
}

/// 2x3 Jacobian of the pinhole projection w.r.t. the camera-frame point.
inline Eigen::Matrix<double, 2, 3> projection_jacobian(
    const CameraIntrinsics& intr, const Vec3& p_cam) {
  if (p_cam.z() <= 0.0) {
    throw BehindCameraError("projection_jacobian: point at or behind camera");
  }
  const double z = p_cam.z();
  Eigen::Matrix<double, 2, 3> J;
  J << intr.fx / z, 0.0, -intr.fx * p_cam.x() / (z * z),  //
      0.0, intr.fy / z, -intr.fy * p_cam.y() / (z * z);
  return J;
}

/// Image interaction matrix L_s: maps the camera twist [v; w] (camera-frame,
/// moving camera over a static point) to the pixel velocity of the feature.
///
///   L_s = [ -fx/d   0      u^/d   u^v^/fy     -u^2/fx - fx   fx v^/fy ]
///         [  0     -fy/d   v^/d   v^2/fy + fy  -u^v^/fx     -fy u^/fx ]
///
/// with u^ = u - u0, v^ = v - v0.
inline Mat26 interaction_matrix(const CameraIntrinsics& intr,
                                const ImageFeature& s, const FeatureDepth& depth) {
  require(std::isfinite(s.u) && std::isfinite(s.v),
          "interaction_matrix: non-finite feature");
  require(depth.d > 0.0, "interaction_matrix: depth must be > 0");
  const double uh = s.u - intr.u0;
  const double vh = s.v - intr.v0;
  const double d = depth.d;
  Mat26 L;
  L << -intr.fx / d, 0.0, uh / d, uh * vh / intr.fy,
      -uh * uh / intr.fx - intr.fx, intr.fx * vh / intr.fy,  //
      0.0, -intr.fy / d, vh / d, vh * vh / intr.fy + intr.fy,
      -uh * vh / intr.fx, -intr.fy * uh / intr.fx;
  return L;
}

/// 6x6 twist transform taking a twist [v; w] expressed in frame A into frame
/// B, given the pose of A in B (rotation R_ba, origin offset p_ba):
///   v_b = R v_a + [p]x R w_a,  w_b = R w_a.
inline Mat6 twist_adjoint(const Mat3& R_ba, const Vec3& p_ba) {
  Mat3 px;
  px << 0.0, -p_ba.z(), p_ba.y(),  //
      p_ba.z(), 0.0, -p_ba.x(),    //
      -p_ba.y(), p_ba.x(), 0.0;
  Mat6 Ad = Mat6::Zero();
  Ad.block<3, 3>(0, 0) = R_ba;
  Ad.block<3, 3>(0, 3) = px * R_ba;
  Ad.block<3, 3>(3, 3) = R_ba;
  return Ad;
}

/// Image Jacobian J_s = L_s * Ad * J_r. With the identity adjoint this is the
/// plain composition L_s J_r (TCP frame taken as the camera frame).
inline Mat26 image_jacobian(const Mat26& L_s, const Mat6& J_r,
                            const Mat6& tcp_to_cam = Mat6::Identity()) {
  return L_s * tcp_to_cam * J_r;
}

}  // namespace vsvpc
