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

#include <algorithm>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vsvpc/controller.hpp"
#include "vsvpc/core.hpp"
#include "vsvpc/gpr.hpp"
#include "vsvpc/kinematics.hpp"
#include "vsvpc/safety.hpp"
#include "vsvpc/vision.hpp"

namespace vsvpc {

// Ground-truth plant and episode runner. The true plant carries the perturbed
// DH table; the residual the controller sees arises physically from that
// mismatch plus the scripted instrument motion and measurement noise.

struct ScriptPoint {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  int target_index = 0;  // node being approached on the segment ending here
};

struct InstrumentScript {
  std::string name;
  std::vector<ScriptPoint> waypoints;

  void validate() const {
    require(!waypoints.empty(), "InstrumentScript: empty script");
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
      require(waypoints[i].t > waypoints[i - 1].t,
              "InstrumentScript: timestamps must be strictly increasing");
    }
  }

  Vec3 position(double t) const {
    if (t <= waypoints.front().t) return waypoints.front().p;
    if (t >= waypoints.back().t) return waypoints.back().p;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
      if (t <= waypoints[i].t) {
        const double a =
            (t - waypoints[i - 1].t) / (waypoints[i].t - waypoints[i - 1].t);
        return (1.0 - a) * waypoints[i - 1].p + a * waypoints[i].p;
      }
    }
    return waypoints.back().p;
  }

  int target_at(double t) const {
    if (t <= waypoints.front().t) return waypoints.front().target_index;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
      if (t <= waypoints[i].t) return waypoints[i].target_index;
    }
    return waypoints.back().target_index;
  }
};

struct LabeledTarget {
  std::string label;
  Vec3 p = Vec3::Zero();
};

struct Scenario {
  std::string name = "scenario";
  RobotModel robot;  // nominal model
  JointState q0;
  double dh_perturb_fraction = 0.1;
  CameraIntrinsics camera;
  Mat3 mount_R = Mat3::Identity();  // fixed TCP->camera rotation (calibrated)
  Vec3 mount_t = Vec3::Zero();      // camera origin in the TCP frame [m]
  FovDisc fov;
  std::vector<LabeledTarget> targets;
  std::vector<InstrumentScript> instruments;  // 1 or 2, [0] is active
  double sigma_process_m = 0.001;  // 3-D measurement noise std [m]
  NoiseParams noise;               // sigma_w2 [px^2] and B_d
  std::uint64_t seed_dh = 1;
  std::uint64_t seed_noise = 2;
  std::uint64_t seed_excitation = 3;
  double duration = 40.0;
  double dt = 0.05;
  double d_near = 0.02;  // virtual-weight schedule [m]
  double d_far = 0.10;
  VPCConfig controller;
  GPHyperparams gp;
  Mat6 M_ref = Mat6::Identity();
  double sustained_threshold = 90.0;  // FoVSR % below which MAE/RMSE are absent

  void validate() const {
    robot.validate();
    camera.validate();
    fov.validate();
    noise.validate();
    gp.validate();
    controller.validate();
    require(dt > 0.0, "Scenario: dt must be > 0");
    require(duration > 0.0, "Scenario: duration must be > 0");
    require(!targets.empty(), "Scenario: targets must be nonempty");
    require(!instruments.empty() && instruments.size() <= 2,
            "Scenario: need 1 or 2 instruments");
    for (const auto& ins : instruments) ins.validate();
    require(0.0 < d_near && d_near < d_far, "Scenario: need 0 < d_near < d_far");
    require(dh_perturb_fraction >= 0.0 && dh_perturb_fraction < 1.0,
            "Scenario: dh_perturb_fraction must be in [0, 1)");
    require(sigma_process_m >= 0.0, "Scenario: sigma_process_m must be >= 0");
  }
};

struct VirtualTargetWeights {
  double w_n1 = 0.0;
  double w_n2 = 0.0;
  double w_l = 0.0;

  void validate() const {
    require(w_n1 >= 0.0 && w_n2 >= 0.0 && w_l >= 0.0,
            "VirtualTargetWeights: weights must be >= 0");
    require(std::abs(w_n1 + w_n2 + w_l - 1.0) <= 1e-12,
            "VirtualTargetWeights: weights must sum to 1");
  }
};

/// Convex combination of the two instrument tips and the current target.
inline Vec3 virtual_target(const Vec3& p_n1, const Vec3& p_n2, const Vec3& p_l,
                           const VirtualTargetWeights& w) {
  w.validate();
  return w.w_n1 * p_n1 + w.w_n2 * p_n2 + w.w_l * p_l;
}

/// Proximity schedule: w_l ramps from 0.5 (at/inside d_near) to 0.2 (at/past
/// d_far); the remaining mass goes to the instruments, split by inverse
/// distance to the target (pass +inf for an absent second instrument).
inline VirtualTargetWeights weight_update(
    double dist_active_to_target, double d_near, double d_far,
    double dist_n1 = 1.0, double dist_n2 = std::numeric_limits<double>::infinity()) {
  require(0.0 < d_near && d_near < d_far, "weight_update: need 0 < d_near < d_far");
  const double rho =
      std::clamp((dist_active_to_target - d_near) / (d_far - d_near), 0.0, 1.0);
  VirtualTargetWeights w;
  w.w_l = 0.5 * (1.0 - rho) + 0.2 * rho;
  const double eps = 1e-9;
  const double inv1 = std::isfinite(dist_n1) ? 1.0 / std::max(dist_n1, eps) : 0.0;
  const double inv2 = std::isfinite(dist_n2) ? 1.0 / std::max(dist_n2, eps) : 0.0;
  const double mass = 1.0 - w.w_l;
  if (inv1 + inv2 <= 0.0) {
    w.w_n1 = mass;  // degenerate: both absent; keep the convex sum
  } else {
    w.w_n1 = mass * inv1 / (inv1 + inv2);
    w.w_n2 = mass * inv2 / (inv1 + inv2);
  }
  // Renormalize against rounding.
  const double s = w.w_n1 + w.w_n2 + w.w_l;
  w.w_n1 /= s;
  w.w_n2 /= s;
  w.w_l /= s;
  return w;
}

struct PlantState {
  RobotModel true_model;  // perturbed
  JointState q;
  Rng rng;
  bool limit_clamped = false;

  PlantState(RobotModel model, JointState q0, std::uint64_t noise_seed)
      : true_model(std::move(model)), q(q0), rng(noise_seed) {}
};

struct PlantMeasurement {
  ImageFeature s_true;  // noisy measured pixel of the tracked point
  double depth = 0.0;   // true camera-frame depth
};

inline Mat4 mount_pose(const Mat3& mount_R, const Vec3& mount_t) {
  Mat4 M = Mat4::Identity();
  M.block<3, 3>(0, 0) = mount_R;
  M.block<3, 1>(0, 3) = mount_t;
  return M;
}

inline Mat4 camera_pose(const RobotModel& model, const JointState& q,
                        const Mat4& mount) {
  return forward_kinematics(model, q).T * mount;
}

/// Projects a world point through the given kinematic model + camera; returns
/// the clean pixel and depth.
inline PlantMeasurement project_world_point(const RobotModel& model,
                                            const JointState& q,
                                            const Mat4& mount,
                                            const CameraIntrinsics& intr,
                                            const Vec3& p_world) {
  const Mat4 T_cam = camera_pose(model, q, mount);
  const Mat3 R = T_cam.block<3, 3>(0, 0);
  const Vec3 t = T_cam.block<3, 1>(0, 3);
  const Vec3 p_cam = R.transpose() * (p_world - t);
  PlantMeasurement m;
  m.depth = p_cam.z();
  m.s_true = project(intr, p_cam);
  return m;
}

/// Measures the tracked point through the TRUE plant: projection through the
/// perturbed kinematics plus pixel-mapped Gaussian noise (a 3-D disturbance
/// of std sigma_m on the camera-frame point, pushed through the projection
/// Jacobian).
inline PlantMeasurement plant_measure(PlantState& state, const Mat4& mount,
                                      const CameraIntrinsics& intr,
                                      const Vec3& p_world, double sigma_m) {
  const Mat4 T_cam = camera_pose(state.true_model, state.q, mount);
  const Mat3 R = T_cam.block<3, 3>(0, 0);
  const Vec3 t = T_cam.block<3, 1>(0, 3);
  const Vec3 p_cam = R.transpose() * (p_world - t);
  PlantMeasurement m;
  m.depth = p_cam.z();
  const ImageFeature clean = project(intr, p_cam);
  Vec3 n3(state.rng.gaussian(), state.rng.gaussian(), state.rng.gaussian());
  const Vec2 dpix = projection_jacobian(intr, p_cam) * (sigma_m * n3);
  m.s_true = ImageFeature{clean.u + dpix.x(), clean.v + dpix.y()};
  return m;
}

/// Euler-integrates the joints with the commanded velocity, clamping at the
/// limits (flagged), then measures the tracked point at the new state.
inline PlantMeasurement plant_step(PlantState& state, const Vec6& qdot,
                                   double dt, const Mat4& mount,
                                   const CameraIntrinsics& intr,
                                   const Vec3& p_world, double sigma_m) {
  require(dt > 0.0, "plant_step: dt must be > 0");
  require(all_finite(qdot), "plant_step: non-finite command");
  state.limit_clamped = false;
  for (int k = 0; k < 6; ++k) {
    double qk = state.q.q[k] + dt * qdot[k];
    if (qk < state.true_model.joint_min[k]) {
      qk = state.true_model.joint_min[k];
      state.limit_clamped = true;
    } else if (qk > state.true_model.joint_max[k]) {
      qk = state.true_model.joint_max[k];
      state.limit_clamped = true;
    }
    state.q.q[k] = qk;
  }
  return plant_measure(state, mount, intr, p_world, sigma_m);
}

struct LogRecord {
  double t = 0.0;
  Vec6 q = Vec6::Zero();
  Vec6 qdot = Vec6::Zero();
  Vec2 s_true = Vec2::Zero();
  Vec2 s_nom = Vec2::Zero();
  Vec2 s_bar = Vec2::Zero();
  double sigma_s = 0.0;
  double h = 0.0;
  double h_sigma = 0.0;
  double cbc = 0.0;
  double slack = 0.0;
  int status = 0;
  Vec2 target_px = Vec2::Zero();  // in-memory only, not a CSV column
  bool clamped = false;
};

struct TrajectoryLog {
  double dt = 0.05;
  std::vector<LogRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

inline void save_log_csv(const TrajectoryLog& log, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "save_log_csv: cannot open " + path);
  out << "t,q1,q2,q3,q4,q5,q6,qd1,qd2,qd3,qd4,qd5,qd6,"
         "su_true,sv_true,su_nom,sv_nom,su_bar,sv_bar,"
         "sigma_s,h,h_sigma,cbc,slack,status\n";
  out.precision(17);
  for (const auto& r : log.records) {
    out << r.t;
    for (int k = 0; k < 6; ++k) out << ',' << r.q[k];
    for (int k = 0; k < 6; ++k) out << ',' << r.qdot[k];
    out << ',' << r.s_true.x() << ',' << r.s_true.y();
    out << ',' << r.s_nom.x() << ',' << r.s_nom.y();
    out << ',' << r.s_bar.x() << ',' << r.s_bar.y();
    out << ',' << r.sigma_s << ',' << r.h << ',' << r.h_sigma << ',' << r.cbc
        << ',' << r.slack << ',' << r.status << '\n';
  }
}

inline TrajectoryLog load_log_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "load_log_csv: cannot open " + path);
  TrajectoryLog log;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("t,", 0) == 0) continue;
    }
    std::istringstream ss(line);
    std::vector<double> vals;
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    require(vals.size() == 25, "load_log_csv: bad column count");
    LogRecord r;
    std::size_t i = 0;
    r.t = vals[i++];
    for (int k = 0; k < 6; ++k) r.q[k] = vals[i++];
    for (int k = 0; k < 6; ++k) r.qdot[k] = vals[i++];
    r.s_true = Vec2(vals[i], vals[i + 1]); i += 2;
    r.s_nom = Vec2(vals[i], vals[i + 1]); i += 2;
    r.s_bar = Vec2(vals[i], vals[i + 1]); i += 2;
    r.sigma_s = vals[i++];
    r.h = vals[i++];
    r.h_sigma = vals[i++];
    r.cbc = vals[i++];
    r.slack = vals[i++];
    r.status = static_cast<int>(vals[i++]);
    log.records.push_back(r);
    if (log.records.size() >= 2) {
      log.dt = log.records[1].t - log.records[0].t;
    }
  }
  return log;
}

struct EpisodeOptions {
  std::size_t gp_window = 30;
  std::optional<GPModel> gp;  // offline-trained model for the enhanced variant
};

namespace detail {

struct SceneState {
  Vec3 p_track = Vec3::Zero();   // tracked point (virtual target or raw tip)
  Vec3 p_node = Vec3::Zero();    // current surgical node
};

inline SceneState scene_state(const Scenario& sc, double t,
                              ControllerVariant variant) {
  const auto& act = sc.instruments[0];
  const Vec3 p1 = act.position(t);
  const int ti = act.target_at(t);
  SceneState out;
  out.p_node = sc.targets[static_cast<std::size_t>(
                   std::clamp(ti, 0, static_cast<int>(sc.targets.size()) - 1))]
                   .p;
  if (variant == ControllerVariant::kFullyTracking) {
    out.p_track = p1;
    return out;
  }
  const double d1 = (p1 - out.p_node).norm();
  double d2 = std::numeric_limits<double>::infinity();
  Vec3 p2 = p1;
  if (sc.instruments.size() > 1) {
    p2 = sc.instruments[1].position(t);
    d2 = (p2 - out.p_node).norm();
  }
  const VirtualTargetWeights w = weight_update(d1, sc.d_near, sc.d_far, d1, d2);
  out.p_track = virtual_target(p1, p2, out.p_node, w);
  return out;
}

}  // namespace detail

/// Runs one closed-loop episode. A parallel disturbance-free rollout (the
/// nominal kinematics fed the exact same commands, no noise) produces
/// s_nominal alongside the true trajectory.
inline TrajectoryLog run_episode(const Scenario& scenario,
                                 ControllerVariant variant,
                                 const VPCConfig& cfg,
                                 const EpisodeOptions& opts = {}) {
  scenario.validate();
  const auto nsteps = static_cast<std::size_t>(
      std::llround(scenario.duration / scenario.dt));
  require(nsteps >= 1, "run_episode: duration too short");

  const RobotModel true_model = perturb_dh(
      scenario.robot, scenario.dh_perturb_fraction, scenario.seed_dh);
  PlantState plant(true_model, scenario.q0, scenario.seed_noise);

  Controller controller(variant, cfg, scenario.fov, scenario.noise,
                        scenario.robot, scenario.fov.center);
  if (variant == ControllerVariant::kVisionSafeEnhanced) {
    controller.set_gp(opts.gp.value_or(GPModel::fit({}, scenario.gp)));
  }

  TrajectoryLog log;
  log.dt = scenario.dt;
  log.records.reserve(nsteps);

  bool have_prev = false;
  ImageFeature s_prev;
  Vec6 qdot_prev = Vec6::Zero();
  Mat26 Js_prev = Mat26::Zero();

  const Mat4 mount = mount_pose(scenario.mount_R, scenario.mount_t);
  for (std::size_t k = 0; k < nsteps; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;
    const detail::SceneState scene = detail::scene_state(scenario, t, variant);
    const Vec3& p_track = scene.p_track;

    const PlantMeasurement meas = plant_measure(
        plant, mount, scenario.camera, p_track, scenario.sigma_process_m);
    const PlantMeasurement nom = project_world_point(
        scenario.robot, plant.q, mount, scenario.camera, p_track);

    // Setpoint: keep the current surgical node centered, expressed through
    // the tracked feature (the pursuit baseline instead centers its feature
    // outright).
    if (variant == ControllerVariant::kFullyTracking) {
      controller.set_target(scenario.fov.center);
    } else {
      const PlantMeasurement node_px = project_world_point(
          plant.true_model, plant.q, mount, scenario.camera, scene.p_node);
      const Vec2 sd = meas.s_true.vec() - node_px.s_true.vec() +
                      scenario.fov.center.vec();
      controller.set_target(ImageFeature::from(sd));
    }

    const Mat26 L = interaction_matrix(scenario.camera, meas.s_true,
                                       FeatureDepth{meas.depth});
    const Pose tcp = forward_kinematics(scenario.robot, plant.q);
    const Mat3 R_cb = (tcp.rotation() * scenario.mount_R).transpose();
    const Vec3 lever = -(R_cb * (tcp.rotation() * scenario.mount_t));
    const Mat6 Ad = twist_adjoint(R_cb, lever);
    const Mat26 J_s =
        image_jacobian(L, geometric_jacobian(scenario.robot, plant.q), Ad);

    if (variant == ControllerVariant::kVisionSafeEnhanced && have_prev) {
      const Vec2 y = residual_target(s_prev, meas.s_true, qdot_prev, Js_prev,
                                     scenario.dt, scenario.noise.B_d);
      controller.observe_residual(gp_input(s_prev, qdot_prev), y,
                                  opts.gp_window);
    }

    Observation obs;
    obs.s_meas = meas.s_true;
    obs.q = plant.q;
    obs.J_s = J_s;
    obs.depth = meas.depth;
    StepDiagnostics diag;
    const Vec6 qdot = controller.step(obs, &diag);

    LogRecord rec;
    rec.t = t;
    rec.q = plant.q.q;
    rec.qdot = qdot;
    rec.s_true = meas.s_true.vec();
    rec.s_nom = nom.s_true.vec();
    rec.s_bar = diag.s_bar;
    rec.sigma_s = diag.sigma_s;
    rec.h = diag.h;
    rec.h_sigma = diag.h_sigma;
    rec.cbc = diag.cbc;
    rec.slack = diag.slack;
    rec.status = diag.status;
    rec.target_px = Vec2(controller.target().u, controller.target().v);

    s_prev = meas.s_true;
    qdot_prev = qdot;
    Js_prev = J_s;
    have_prev = true;

    plant_step(plant, qdot, scenario.dt, mount, scenario.camera,
               p_track, 0.0);  // noise is applied at measurement time
    rec.clamped = plant.limit_clamped;
    log.records.push_back(rec);
  }
  return log;
}

/// Offline GP data collection: an excitation episode with smooth random joint
/// velocities inside the limits (sum of sines), instruments held at their
/// initial positions. Returns n (z, y) pairs.
inline GPDataset collect_offline_dataset(const Scenario& scenario,
                                         std::size_t n_samples) {
  scenario.validate();
  const RobotModel true_model = perturb_dh(
      scenario.robot, scenario.dh_perturb_fraction, scenario.seed_dh);
  PlantState plant(true_model, scenario.q0,
                   mix_seed(scenario.seed_excitation, 7));
  Rng cmd_rng(scenario.seed_excitation);

  struct SineCmd {
    double amp, omega, phase;
  };
  std::array<std::array<SineCmd, 3>, 6> waves;
  for (int j = 0; j < 6; ++j) {
    const double vmax = std::min(std::abs(scenario.robot.joint_vel_min[j]),
                                 std::abs(scenario.robot.joint_vel_max[j]));
    for (auto& wv : waves[static_cast<std::size_t>(j)]) {
      wv.amp = 0.25 * vmax * cmd_rng.uniform(0.2, 1.0);
      wv.omega = 2.0 * M_PI * cmd_rng.uniform(0.1, 0.8);
      wv.phase = cmd_rng.uniform(0.0, 2.0 * M_PI);
    }
  }
  auto command = [&](double t) {
    Vec6 u;
    for (int j = 0; j < 6; ++j) {
      double v = 0.0;
      for (const auto& wv : waves[static_cast<std::size_t>(j)]) {
        v += wv.amp * std::sin(wv.omega * t + wv.phase);
      }
      u[j] = v;
    }
    return u;
  };

  const Vec3 p_track =
      detail::scene_state(scenario, 0.0, ControllerVariant::kClassical).p_track;
  const Mat4 mount = mount_pose(scenario.mount_R, scenario.mount_t);

  GPDataset data;
  PlantMeasurement meas = plant_measure(plant, mount, scenario.camera,
                                        p_track, scenario.sigma_process_m);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;
    const Vec6 u = command(t);
    const Mat26 L = interaction_matrix(scenario.camera, meas.s_true,
                                       FeatureDepth{meas.depth});
    const Pose tcp = forward_kinematics(scenario.robot, plant.q);
    const Mat3 R_cb = (tcp.rotation() * scenario.mount_R).transpose();
    const Vec3 lever = -(R_cb * (tcp.rotation() * scenario.mount_t));
    const Mat26 J_s = image_jacobian(
        L, geometric_jacobian(scenario.robot, plant.q), twist_adjoint(R_cb, lever));
    const ImageFeature s_k = meas.s_true;
    plant_step(plant, u, scenario.dt, mount, scenario.camera, p_track, 0.0);
    meas = plant_measure(plant, mount, scenario.camera, p_track,
                         scenario.sigma_process_m);
    const Vec2 y = residual_target(s_k, meas.s_true, u, J_s, scenario.dt,
                                   scenario.noise.B_d);
    data.push_back(gp_input(s_k, u), y);
  }
  return data;
}

}  // namespace vsvpc
