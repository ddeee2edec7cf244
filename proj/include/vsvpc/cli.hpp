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
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsvpc/config.hpp"
#include "vsvpc/metrics.hpp"
#include "vsvpc/simulator.hpp"

namespace vsvpc {

// Batch runner and comparison harness. Exit codes: 0 success, 1 solver hard
// failure inside an episode, 2 bad input (missing/unparsable files, empty
// report directory).

struct RunSpec {
  std::string scenario_path;
  std::vector<ControllerVariant> variants;
  std::vector<std::uint64_t> seeds;
  std::string output_dir = ".";
  bool emit_logs = true;
  bool emit_report = true;
  std::size_t gp_offline_samples = 50;
  std::size_t gp_window = 30;
};

namespace cli_detail {

inline std::string cell_name(const Scenario& sc, ControllerVariant v,
                             std::uint64_t seed) {
  return sc.name + "_" + to_string(v) + "_seed" + std::to_string(seed);
}

inline nlohmann::json report_to_json(const MetricReport& rep,
                                     std::uint64_t seed_dh,
                                     std::uint64_t seed_noise,
                                     std::uint64_t seed_excitation) {
  nlohmann::json j;
  j["scenario"] = rep.scenario;
  j["variant"] = rep.variant;
  j["seed"] = rep.seed;
  j["seeds"] = {{"dh", seed_dh}, {"noise", seed_noise},
                {"excitation", seed_excitation}};
  j["sustained"] = rep.sustained;
  j["metrics"]["fovsr"] = rep.fovsr;
  if (rep.mae) {
    j["metrics"]["mae"] = *rep.mae;
    j["metrics"]["rmse"] = *rep.rmse;
  } else {
    j["metrics"]["mae"] = nullptr;
    j["metrics"]["rmse"] = nullptr;
  }
  j["metrics"]["avss"] = rep.avss;
  j["metrics"]["mac"] = rep.mac;
  return j;
}

inline double median(std::vector<double> v) {
  require(!v.empty(), "median: empty");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace cli_detail

/// Runs one (variant, seed) cell: offline GP collection + fit for the
/// GP-backed variant, then the evaluation episode. Returns the report.
inline MetricReport run_cell(const Scenario& base, ControllerVariant variant,
                             std::uint64_t seed, const RunSpec& spec,
                             TrajectoryLog* log_out = nullptr) {
  Scenario sc = base;
  sc.seed_dh = mix_seed(seed, 1);
  sc.seed_noise = mix_seed(seed, 2);
  sc.seed_excitation = mix_seed(seed, 3);

  EpisodeOptions opts;
  opts.gp_window = spec.gp_window;
  if (variant == ControllerVariant::kVisionSafeEnhanced) {
    const GPDataset data = collect_offline_dataset(sc, spec.gp_offline_samples);
    opts.gp = GPModel::fit(data, sc.gp);
  }
  const TrajectoryLog log = run_episode(sc, variant, sc.controller, opts);
  MetricReport rep =
      compute_report(log, sc.fov, sc.M_ref, sc.sustained_threshold);
  rep.scenario = sc.name;
  rep.variant = to_string(variant);
  rep.seed = seed;
  if (log_out != nullptr) *log_out = log;
  return rep;
}

inline int cmd_run(const RunSpec& spec) {
  require(!spec.variants.empty() && !spec.seeds.empty(),
          "cmd_run: variants and seeds must be nonempty");
  Scenario sc;
  try {
    sc = load_scenario(spec.scenario_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::error_code ec;
  std::filesystem::create_directories(spec.output_dir, ec);

  for (const ControllerVariant variant : spec.variants) {
    for (const std::uint64_t seed : spec.seeds) {
      const std::string cell = cli_detail::cell_name(sc, variant, seed);
      try {
        TrajectoryLog log;
        const MetricReport rep = run_cell(sc, variant, seed, spec, &log);
        if (spec.emit_logs) {
          save_log_csv(log, spec.output_dir + "/log_" + cell + ".csv");
        }
        if (spec.emit_report) {
          std::ofstream out(spec.output_dir + "/report_" + cell + ".json");
          require(out.good(), "cmd_run: cannot write report for " + cell);
          out << cli_detail::report_to_json(rep, mix_seed(seed, 1),
                                            mix_seed(seed, 2),
                                            mix_seed(seed, 3))
                     .dump(2)
              << '\n';
        }
      } catch (const std::exception& e) {
        std::cerr << "error: episode " << cell << " failed: " << e.what()
                  << '\n';
        return 1;
      }
    }
  }
  return 0;
}

struct AggregateRow {
  std::string variant;
  std::optional<double> mae;
  std::optional<double> rmse;
  double fovsr = 0.0;
  double avss = 0.0;
  double mac = 0.0;
  std::size_t n_seeds = 0;
};

/// Reads every report_*.json in the directory and aggregates per-variant
/// medians, grouped by scenario. Row order follows the comparison tables:
/// Classical, VisionSafe, VisionSafeEnhanced, FullyTracking.
inline std::map<std::string, std::vector<AggregateRow>> aggregate_reports(
    const std::string& report_dir) {
  struct Cell {
    std::vector<double> mae, rmse, fovsr, avss, mac;
  };
  std::map<std::string, std::map<std::string, Cell>> by_scenario;
  for (const auto& entry : std::filesystem::directory_iterator(report_dir)) {
    const std::string fname = entry.path().filename().string();
    if (fname.rfind("report_", 0) != 0 || entry.path().extension() != ".json") {
      continue;
    }
    std::ifstream in(entry.path());
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error&) {
      continue;  // not one of ours
    }
    Cell& c = by_scenario[j.at("scenario").get<std::string>()]
                         [j.at("variant").get<std::string>()];
    const auto& m = j.at("metrics");
    c.fovsr.push_back(m.at("fovsr").get<double>());
    c.avss.push_back(m.at("avss").get<double>());
    c.mac.push_back(m.at("mac").get<double>());
    if (!m.at("mae").is_null()) {
      c.mae.push_back(m.at("mae").get<double>());
      c.rmse.push_back(m.at("rmse").get<double>());
    }
  }

  static const char* kOrder[] = {"Classical", "VisionSafe",
                                 "VisionSafeEnhanced", "FullyTracking"};
  std::map<std::string, std::vector<AggregateRow>> out;
  for (auto& [scenario, cells] : by_scenario) {
    for (const char* name : kOrder) {
      auto it = cells.find(name);
      if (it == cells.end()) continue;
      AggregateRow row;
      row.variant = name;
      row.n_seeds = it->second.fovsr.size();
      row.fovsr = cli_detail::median(it->second.fovsr);
      row.avss = cli_detail::median(it->second.avss);
      row.mac = cli_detail::median(it->second.mac);
      // MAE/RMSE only when sustained in at least half the seeds.
      if (!it->second.mae.empty() &&
          2 * it->second.mae.size() >= it->second.fovsr.size()) {
        row.mae = cli_detail::median(it->second.mae);
        row.rmse = cli_detail::median(it->second.rmse);
      }
      out[scenario].push_back(row);
    }
  }
  return out;
}

inline int cmd_compare(const std::string& report_dir) {
  if (!std::filesystem::is_directory(report_dir)) {
    std::cerr << "error: not a directory: " << report_dir << '\n';
    return 2;
  }
  const auto agg = aggregate_reports(report_dir);
  if (agg.empty()) {
    std::cerr << "error: no reports found in " << report_dir << '\n';
    return 2;
  }
  auto fmt = [](std::optional<double> v) {
    if (!v) return std::string("--");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *v);
    return std::string(buf);
  };
  for (const auto& [scenario, rows] : agg) {
    std::printf("Scenario: %s (median over seeds)\n", scenario.c_str());
    std::printf("%-24s %10s %10s %9s %12s %10s %6s\n", "Method", "MAE", "RMSE",
                "FoVSR", "AVSS", "MAC", "n");
    for (const auto& r : rows) {
      char fov[32], av[32], mac[32];
      std::snprintf(fov, sizeof(fov), "%.2f%%", r.fovsr);
      std::snprintf(av, sizeof(av), "%.3e", r.avss);
      std::snprintf(mac, sizeof(mac), "%.4f", r.mac);
      std::printf("%-24s %10s %10s %9s %12s %10s %6zu\n",
                  (r.variant + " VPC").c_str(), fmt(r.mae).c_str(),
                  fmt(r.rmse).c_str(), fov, av, mac, r.n_seeds);
    }
    std::printf("\n");
  }
  return 0;
}

}  // namespace vsvpc
