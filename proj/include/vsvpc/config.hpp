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

#include <fstream>
#include <string>

#include <json.hpp>

#include "vsvpc/simulator.hpp"

namespace vsvpc {

// Scenario configuration files (JSON). Matrices may be given either as a
// scalar (meaning scalar * identity) or as full nested arrays.

namespace config_detail {

using nlohmann::json;

inline Mat3 rpy_to_rotation(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
          Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
          Eigen::AngleAxisd(roll, Vec3::UnitX()))
      .toRotationMatrix();
}

template <int N>
Eigen::Matrix<double, N, 1> parse_vec(const json& j, const std::string& key) {
  require(j.contains(key), "scenario: missing key '" + key + "'");
  const auto& arr = j.at(key);
  require(arr.is_array() && arr.size() == N,
          "scenario: '" + key + "' must be an array of " + std::to_string(N));
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = arr.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

template <int N>
Eigen::Matrix<double, N, N> parse_mat(const json& j, const std::string& key,
                                      double fallback_scale) {
  if (!j.contains(key)) {
    return fallback_scale * Eigen::Matrix<double, N, N>::Identity();
  }
  const auto& m = j.at(key);
  if (m.is_number()) {
    return m.get<double>() * Eigen::Matrix<double, N, N>::Identity();
  }
  require(m.is_array() && m.size() == N, "scenario: bad matrix '" + key + "'");
  Eigen::Matrix<double, N, N> out;
  for (int r = 0; r < N; ++r) {
    const auto& row = m.at(static_cast<std::size_t>(r));
    require(row.is_array() && row.size() == N,
            "scenario: bad matrix row in '" + key + "'");
    for (int c = 0; c < N; ++c) {
      out(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return out;
}

template <int N>
json dump_mat(const Eigen::Matrix<double, N, N>& m) {
  json rows = json::array();
  for (int r = 0; r < N; ++r) {
    json row = json::array();
    for (int c = 0; c < N; ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

template <typename Derived>
json dump_vec(const Eigen::MatrixBase<Derived>& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace config_detail

inline Scenario scenario_from_json(const nlohmann::json& j) {
  using config_detail::parse_mat;
  using config_detail::parse_vec;
  Scenario sc;
  sc.name = j.value("name", "scenario");

  const auto& jr = j.at("robot");
  const auto& dh = jr.at("dh");
  require(dh.is_array() && dh.size() == 6, "scenario: robot.dh needs 6 rows");
  for (std::size_t i = 0; i < 6; ++i) {
    sc.robot.dh[i].a = dh.at(i).value("a", 0.0);
    sc.robot.dh[i].alpha = dh.at(i).value("alpha", 0.0);
    sc.robot.dh[i].d = dh.at(i).value("d", 0.0);
    sc.robot.dh[i].theta0 = dh.at(i).value("theta0", 0.0);
  }
  sc.robot.joint_min = parse_vec<6>(jr, "joint_min");
  sc.robot.joint_max = parse_vec<6>(jr, "joint_max");
  sc.robot.joint_vel_min = parse_vec<6>(jr, "joint_vel_min");
  sc.robot.joint_vel_max = parse_vec<6>(jr, "joint_vel_max");
  sc.q0.q = parse_vec<6>(j, "q0");
  sc.dh_perturb_fraction = j.value("dh_perturb_fraction", 0.1);

  const auto& jc = j.at("camera");
  sc.camera.fx = jc.at("fx").get<double>();
  sc.camera.fy = jc.at("fy").get<double>();
  sc.camera.u0 = jc.at("u0").get<double>();
  sc.camera.v0 = jc.at("v0").get<double>();
  Vec3 rpy = Vec3::Zero();
  if (jc.contains("mount_rpy")) rpy = parse_vec<3>(jc, "mount_rpy");
  sc.mount_R = config_detail::rpy_to_rotation(rpy[0], rpy[1], rpy[2]);
  sc.mount_t = Vec3::Zero();
  if (jc.contains("mount_xyz")) sc.mount_t = parse_vec<3>(jc, "mount_xyz");

  const auto& jf = j.at("fov");
  const Vec2 c = parse_vec<2>(jf, "center");
  sc.fov.center = ImageFeature{c.x(), c.y()};
  sc.fov.radius = jf.at("radius").get<double>();

  for (const auto& jt : j.at("targets")) {
    LabeledTarget t;
    t.label = jt.at("label").get<std::string>();
    t.p = parse_vec<3>(jt, "p");
    sc.targets.push_back(t);
  }
  auto target_index = [&](const std::string& label) {
    for (std::size_t i = 0; i < sc.targets.size(); ++i) {
      if (sc.targets[i].label == label) return static_cast<int>(i);
    }
    throw std::invalid_argument("scenario: unknown target label '" + label + "'");
  };
  for (const auto& ji : j.at("instruments")) {
    InstrumentScript ins;
    ins.name = ji.value("name", "tool");
    for (const auto& jw : ji.at("waypoints")) {
      ScriptPoint p;
      p.t = jw.at("t").get<double>();
      p.p = parse_vec<3>(jw, "p");
      p.target_index = target_index(jw.at("target").get<std::string>());
      ins.waypoints.push_back(p);
    }
    sc.instruments.push_back(ins);
  }

  const auto& jn = j.at("noise");
  sc.sigma_process_m = jn.value("sigma_process_m", 0.001);
  sc.noise.sigma_w2 = jn.value("sigma_w2", 0.0);
  sc.noise.B_d = parse_mat<2>(jn, "B_d", 1.0);

  if (j.contains("seeds")) {
    const auto& js = j.at("seeds");
    sc.seed_dh = js.value("dh", 1ULL);
    sc.seed_noise = js.value("noise", 2ULL);
    sc.seed_excitation = js.value("excitation", 3ULL);
  }
  sc.duration = j.at("duration").get<double>();
  sc.dt = j.at("dt").get<double>();
  if (j.contains("virtual_weights")) {
    sc.d_near = j.at("virtual_weights").value("d_near", 0.02);
    sc.d_far = j.at("virtual_weights").value("d_far", 0.10);
  }

  const auto& jctl = j.at("controller");
  sc.controller.Np = jctl.value("Np", 10);
  sc.controller.Nc = jctl.value("Nc", 5);
  sc.controller.Q = parse_mat<2>(jctl, "Q", 1.0);
  sc.controller.R = parse_mat<6>(jctl, "R", 0.1);
  sc.controller.dt = sc.dt;
  sc.controller.slack_weight = jctl.value("slack_weight", 0.0);
  if (jctl.contains("cbf")) {
    sc.controller.cbf.alpha = jctl.at("cbf").value("alpha", 0.5);
    sc.controller.cbf.beta = jctl.at("cbf").value("beta", 1.0);
  }
  if (jctl.contains("chance")) {
    const auto& jch = jctl.at("chance");
    sc.controller.chance.p_s = jch.value("p_s", 0.95);
    sc.controller.chance.p_u = jch.value("p_u", 0.95);
    sc.controller.chance.input_radius = jch.value("r_u", 1.0);
    if (jch.contains("u_c")) {
      sc.controller.chance.input_center = parse_vec<6>(jch, "u_c");
    }
    sc.controller.chance.input_cov = parse_mat<6>(jch, "Sigma_u", 0.0);
  }

  if (j.contains("gpr")) {
    const auto& jg = j.at("gpr");
    sc.gp.sigma_f2 = jg.value("sigma_f2", 0.1);
    if (jg.contains("length_scales")) {
      sc.gp.length_scales = parse_vec<8>(jg, "length_scales");
    }
    sc.gp.sigma_n2 = jg.value("sigma_n2", 1e-4);
  }
  if (j.contains("metrics")) {
    sc.M_ref = parse_mat<6>(j.at("metrics"), "M_ref", 1.0);
    sc.sustained_threshold = j.at("metrics").value("sustained_threshold", 90.0);
  }
  sc.validate();
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "load_scenario: cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("load_scenario: " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

inline nlohmann::json scenario_to_json(const Scenario& sc) {
  using config_detail::dump_mat;
  using config_detail::dump_vec;
  nlohmann::json j;
  j["name"] = sc.name;
  nlohmann::json dh = nlohmann::json::array();
  for (const auto& row : sc.robot.dh) {
    dh.push_back({{"a", row.a},
                  {"alpha", row.alpha},
                  {"d", row.d},
                  {"theta0", row.theta0}});
  }
  j["robot"] = {{"dh", dh},
                {"joint_min", dump_vec(sc.robot.joint_min)},
                {"joint_max", dump_vec(sc.robot.joint_max)},
                {"joint_vel_min", dump_vec(sc.robot.joint_vel_min)},
                {"joint_vel_max", dump_vec(sc.robot.joint_vel_max)}};
  j["q0"] = dump_vec(sc.q0.q);
  j["dh_perturb_fraction"] = sc.dh_perturb_fraction;
  const Vec3 rpy = sc.mount_R.eulerAngles(2, 1, 0).reverse();
  j["camera"] = {{"fx", sc.camera.fx},   {"fy", sc.camera.fy},
                 {"u0", sc.camera.u0},   {"v0", sc.camera.v0},
                 {"mount_rpy", dump_vec(rpy)}, {"mount_xyz", dump_vec(sc.mount_t)}};
  j["fov"] = {{"center", {sc.fov.center.u, sc.fov.center.v}},
              {"radius", sc.fov.radius}};
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& t : sc.targets) {
    targets.push_back({{"label", t.label}, {"p", dump_vec(t.p)}});
  }
  j["targets"] = targets;
  nlohmann::json instruments = nlohmann::json::array();
  for (const auto& ins : sc.instruments) {
    nlohmann::json wps = nlohmann::json::array();
    for (const auto& w : ins.waypoints) {
      wps.push_back(
          {{"t", w.t},
           {"p", dump_vec(w.p)},
           {"target", sc.targets[static_cast<std::size_t>(w.target_index)].label}});
    }
    instruments.push_back({{"name", ins.name}, {"waypoints", wps}});
  }
  j["instruments"] = instruments;
  j["noise"] = {{"sigma_process_m", sc.sigma_process_m},
                {"sigma_w2", sc.noise.sigma_w2},
                {"B_d", dump_mat<2>(sc.noise.B_d)}};
  j["seeds"] = {{"dh", sc.seed_dh},
                {"noise", sc.seed_noise},
                {"excitation", sc.seed_excitation}};
  j["duration"] = sc.duration;
  j["dt"] = sc.dt;
  j["virtual_weights"] = {{"d_near", sc.d_near}, {"d_far", sc.d_far}};
  j["controller"] = {
      {"Np", sc.controller.Np},
      {"Nc", sc.controller.Nc},
      {"Q", dump_mat<2>(sc.controller.Q)},
      {"R", dump_mat<6>(sc.controller.R)},
      {"slack_weight", sc.controller.slack_weight},
      {"cbf", {{"alpha", sc.controller.cbf.alpha}, {"beta", sc.controller.cbf.beta}}},
      {"chance",
       {{"p_s", sc.controller.chance.p_s},
        {"p_u", sc.controller.chance.p_u},
        {"r_u", sc.controller.chance.input_radius},
        {"u_c", dump_vec(sc.controller.chance.input_center)},
        {"Sigma_u", dump_mat<6>(sc.controller.chance.input_cov)}}}};
  j["gpr"] = {{"sigma_f2", sc.gp.sigma_f2},
              {"length_scales", dump_vec(sc.gp.length_scales)},
              {"sigma_n2", sc.gp.sigma_n2}};
  j["metrics"] = {{"M_ref", dump_mat<6>(sc.M_ref)},
                  {"sustained_threshold", sc.sustained_threshold}};
  return j;
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "save_scenario: cannot open " + path);
  out << scenario_to_json(sc).dump(2) << '\n';
}

}  // namespace vsvpc
