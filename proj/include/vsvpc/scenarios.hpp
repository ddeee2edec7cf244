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

#include "vsvpc/simulator.hpp"

namespace vsvpc {

// Synthetic benchmark scenarios. The arm is a deliberately simple overhead
// 6R chain (all joint axes vertical) carrying a rigid downward-looking scope
// on a calibrated mount: joint-space motion translates the camera over the
// table plane and rolls the image, and the 10% DH perturbation maps mostly
// into depth and image-scale error. Targets sit on the table (z = 0),
// instrument tips hover slightly above it.

namespace scenario_detail {

inline RobotModel overhead_arm() {
  RobotModel m;
  m.dh[0] = DHRow{0.040, 0.0, 1.20, 0.0};
  m.dh[1] = DHRow{0.030, 0.0, 0.0, 0.0};
  m.dh[2] = DHRow{0.020, 0.0, 0.0, 0.0};
  m.dh[3] = DHRow{0.010, 0.0, 0.0, 0.0};
  m.dh[4] = DHRow{0.0, 0.0, 0.0, 0.0};
  m.dh[5] = DHRow{0.0, 0.0, -0.70, 0.0};
  m.joint_min = Vec6::Constant(-2.967);
  m.joint_max = Vec6::Constant(2.967);
  m.joint_vel_min = Vec6::Constant(-0.5);
  m.joint_vel_max = Vec6::Constant(0.5);
  return m;
}

inline Vec3 rotate_about_base(const Vec3& p, double angle) {
  return Vec3(std::cos(angle) * p.x() - std::sin(angle) * p.y(),
              std::sin(angle) * p.x() + std::cos(angle) * p.y(), p.z());
}

inline Scenario base_scenario() {
  Scenario sc;
  sc.robot = overhead_arm();
  sc.q0.q << 0.0, 0.4, -0.7, 0.3, 0.0, 0.0;
  sc.dh_perturb_fraction = 0.1;

  sc.camera.fx = 600.0;
  sc.camera.fy = 600.0;
  sc.camera.u0 = 640.0;
  sc.camera.v0 = 512.0;
  // Scope: camera looks straight down, offset 0.28 m along the TCP x-axis.
  sc.mount_R = Eigen::AngleAxisd(M_PI, Vec3::UnitX()).toRotationMatrix();
  sc.mount_t = Vec3(0.28, 0.0, 0.0);

  sc.fov.center = ImageFeature{sc.camera.u0, sc.camera.v0};
  sc.fov.radius = 125.0;

  sc.sigma_process_m = 0.001;
  // Process-noise scale: the per-step image-space disturbance injected by the
  // stroke-wise instrument motion (busy phases), well above the measurement
  // floor. Calm scenarios override it.
  sc.noise.sigma_w2 = 49.0;
  sc.noise.B_d = Mat2::Identity();

  sc.controller.Np = 10;
  sc.controller.Nc = 5;
  sc.controller.Q = 2e-6 * Mat2::Identity();
  sc.controller.R = 0.1 * Mat6::Identity();
  sc.controller.dt = 0.05;
  sc.controller.cbf.alpha = 0.30;
  sc.controller.cbf.beta = 3.5;
  sc.controller.chance.p_s = 0.975;
  sc.controller.chance.p_u = 0.95;
  sc.controller.chance.input_center = Vec6::Zero();
  sc.controller.chance.input_radius = 0.8;
  sc.controller.chance.input_cov = 4e-4 * Mat6::Identity();

  sc.gp.sigma_f2 = 100.0;
  sc.gp.length_scales << 1.8e5, 1.8e5, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0;
  sc.gp.sigma_n2 = 25.0;

  sc.M_ref = Mat6::Identity();
  sc.sustained_threshold = 90.0;
  sc.dt = 0.05;
  return sc;
}

/// Ground point directly under the camera at the initial configuration.
inline Vec3 camera_ground_point(const Scenario& sc) {
  const Mat4 T = camera_pose(sc.robot, sc.q0, mount_pose(sc.mount_R, sc.mount_t));
  return Vec3(T(0, 3), T(1, 3), 0.0);
}

/// Appends a stroke-and-pause transit from the current end of the script to
/// `dest`: short fast strokes separated by short holds, the way a tool is
/// walked across the field rather than glided at constant speed.
inline void stroke_transit(InstrumentScript& script, const Vec3& dest,
                           int target_index, double stroke_len,
                           double stroke_speed, double pause) {
  Vec3 at = script.waypoints.back().p;
  double t = script.waypoints.back().t;
  while ((dest - at).norm() > 1e-9) {
    const Vec3 to_go = dest - at;
    const double step = std::min(stroke_len, to_go.norm());
    const Vec3 next = at + to_go.normalized() * step;
    t += step / stroke_speed;
    script.waypoints.push_back({t, next, target_index});
    at = next;
    if ((dest - at).norm() > 1e-9) {
      t += pause;
      script.waypoints.push_back({t, at, target_index});
    }
  }
}

inline void dwell(InstrumentScript& script, double seconds) {
  const auto& last = script.waypoints.back();
  script.waypoints.push_back({last.t + seconds, last.p, last.target_index});
}

/// Suturing-style local work: small alternating strokes around the current
/// position with short holds, for roughly `seconds`.
inline void suture(InstrumentScript& script, double seconds, double amplitude,
                   double stroke_speed, double hold) {
  const Vec3 home = script.waypoints.back().p;
  const int target = script.waypoints.back().target_index;
  const double t_end = script.waypoints.back().t + seconds;
  const Vec3 offsets[4] = {Vec3(amplitude, 0, 0), Vec3(0, amplitude, 0),
                           Vec3(-amplitude, 0, 0), Vec3(0, -amplitude, 0)};
  int k = 0;
  while (script.waypoints.back().t < t_end) {
    const Vec3 dest = (k % 2 == 0) ? home + offsets[(k / 2) % 4] : home;
    double t = script.waypoints.back().t;
    const double dist = (dest - script.waypoints.back().p).norm();
    if (dist > 1e-9) {
      t += dist / stroke_speed;
      script.waypoints.push_back({t, dest, target});
    }
    dwell(script, hold);
    ++k;
  }
}

}  // namespace scenario_detail

/// Multi-target tour (L1 -> L2 -> L3 -> L1) with a single active instrument;
/// the default benchmark scenario.
inline Scenario default_scenario() {
  using namespace scenario_detail;
  Scenario sc = base_scenario();
  sc.name = "multi_target";
  sc.duration = 38.0;

  const Vec3 g = camera_ground_point(sc);
  const double tip_z = 0.02;
  const Vec3 L1 = g;
  const Vec3 L2 = rotate_about_base(g, 0.75);
  const Vec3 L3 = rotate_about_base(g, -0.75);
  const Vec3 L0 = g + Vec3(0.02, -0.015, 0.0);
  sc.targets = {{"L0", L0}, {"L1", L1}, {"L2", L2}, {"L3", L3}};

  auto tip = [&](const Vec3& p) { return Vec3(p.x(), p.y(), tip_z); };
  const double stroke_len = 0.055;
  const double stroke_speed = 0.13;
  const double pause = 0.50;
  InstrumentScript scissors;
  scissors.name = "curved_scissors";
  scissors.waypoints.push_back({0.0, tip(L1), 1});
  suture(scissors, 2.5, 0.015, 0.09, 0.7);
  stroke_transit(scissors, tip(L2), 2, stroke_len, stroke_speed, pause);
  suture(scissors, 3.5, 0.015, 0.09, 0.7);
  stroke_transit(scissors, tip(L3), 3, stroke_len, stroke_speed, pause);
  suture(scissors, 3.5, 0.015, 0.09, 0.7);
  stroke_transit(scissors, tip(L1), 1, stroke_len, stroke_speed, pause);
  suture(scissors, 5.0, 0.015, 0.09, 0.7);
  dwell(scissors, sc.duration);
  sc.instruments = {scissors};
  return sc;
}

/// Single-segment scenario (L0 -> L1) with two needle drivers, used for the
/// motion-activity comparison; one driver transits, the other stays parked.
inline Scenario single_segment_scenario() {
  using namespace scenario_detail;
  Scenario sc = base_scenario();
  sc.name = "single_segment";
  sc.duration = 36.0;
  sc.noise.sigma_w2 = 4.0;  // calm single-segment task

  const Vec3 g = camera_ground_point(sc);
  const double tip_z = 0.02;
  const Vec3 L0 = g;
  const double arc_radius = std::hypot(g.x(), g.y());
  const Vec3 L1 = rotate_about_base(g, 0.030 / arc_radius);
  sc.targets = {{"L0", L0}, {"L1", L1}};

  auto tip = [&](const Vec3& p) { return Vec3(p.x(), p.y(), tip_z); };
  InstrumentScript n1;
  n1.name = "needle_driver_1";
  n1.waypoints.push_back({0.0, tip(L0 + Vec3(0.004, 0.003, 0.0)), 0});
  dwell(n1, 2.0);
  stroke_transit(n1, tip(L1), 1, 0.030, 0.13, 0.55);
  suture(n1, sc.duration - 6.0, 0.012, 0.09, 0.45);
  dwell(n1, sc.duration);

  InstrumentScript n2;
  n2.name = "needle_driver_2";
  n2.waypoints.push_back({0.0, tip(L0 + Vec3(-0.008, 0.006, 0.0)), 0});
  dwell(n2, sc.duration + 1.0);
  sc.instruments = {n1, n2};
  return sc;
}

}  // namespace vsvpc
