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

#include <optional>
#include <string>
#include <vector>

#include "vsvpc/core.hpp"
#include "vsvpc/safety.hpp"
#include "vsvpc/simulator.hpp"

namespace vsvpc {

// Evaluation metrics over trajectory logs. Tracking errors are reported in
// normalized image coordinates (pixel distance divided by the FoV radius);
// the boundary counts as inside (h = 0 is safe).

/// FoV satisfaction rate: percent of steps with the true feature inside the
/// closed disc.
inline double fovsr(const TrajectoryLog& log, const FovDisc& fov) {
  require(!log.empty(), "fovsr: empty log");
  std::size_t inside = 0;
  for (const auto& r : log.records) {
    if ((r.s_true - fov.center.vec()).norm() <= fov.radius) ++inside;
  }
  return 100.0 * static_cast<double>(inside) /
         static_cast<double>(log.size());
}

/// Average violation severity: mean of max(0, ||s - s_c||/r - 1).
inline double avss(const TrajectoryLog& log, const FovDisc& fov) {
  require(!log.empty(), "avss: empty log");
  double sum = 0.0;
  for (const auto& r : log.records) {
    const double ratio = (r.s_true - fov.center.vec()).norm() / fov.radius;
    sum += std::max(0.0, ratio - 1.0);
  }
  return sum / static_cast<double>(log.size());
}

struct TrackingErrors {
  double mae = 0.0;
  double rmse = 0.0;
};

/// MAE / RMSE of the deviation between the true trajectory and the parallel
/// nominal (disturbance-free) rollout, normalized by the FoV radius.
inline TrackingErrors tracking_errors(const TrajectoryLog& log,
                                      const FovDisc& fov) {
  require(!log.empty(), "tracking_errors: empty log");
  double sum = 0.0;
  double sum2 = 0.0;
  for (const auto& r : log.records) {
    const double d = (r.s_true - r.s_nom).norm() / fov.radius;
    sum += d;
    sum2 += d * d;
  }
  const double n = static_cast<double>(log.size());
  return TrackingErrors{sum / n, std::sqrt(sum2 / n)};
}

struct MacResult {
  std::vector<double> series;  // cumulative
  double final_value = 0.0;
};

/// Motion activity cost: running sum of qdot^T M_ref qdot over the commanded
/// velocities.
inline MacResult mac(const TrajectoryLog& log, const Mat6& M_ref) {
  Eigen::LLT<Mat6> llt(Mat6(M_ref + 1e-15 * Mat6::Identity()));
  require(llt.info() == Eigen::Success, "mac: M_ref must be PSD");
  MacResult out;
  out.series.reserve(log.size());
  double acc = 0.0;
  for (const auto& r : log.records) {
    acc += r.qdot.dot(M_ref * r.qdot);
    out.series.push_back(acc);
  }
  out.final_value = acc;
  return out;
}

struct MetricReport {
  std::string scenario;
  std::string variant;
  std::uint64_t seed = 0;
  double fovsr = 0.0;
  std::optional<double> mae;   // absent when tracking is not sustained
  std::optional<double> rmse;
  double avss = 0.0;
  double mac = 0.0;
  bool sustained = true;
};

inline MetricReport compute_report(const TrajectoryLog& log, const FovDisc& fov,
                                   const Mat6& M_ref,
                                   double sustained_threshold) {
  MetricReport rep;
  rep.fovsr = fovsr(log, fov);
  rep.avss = avss(log, fov);
  rep.mac = mac(log, M_ref).final_value;
  rep.sustained = rep.fovsr >= sustained_threshold;
  const TrackingErrors te = tracking_errors(log, fov);
  if (rep.sustained) {
    rep.mae = te.mae;
    rep.rmse = te.rmse;
  }
  return rep;
}

}  // namespace vsvpc
