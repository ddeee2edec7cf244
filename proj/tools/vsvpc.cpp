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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vsvpc/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"FoV-safe visual predictive control scenario runner"};
  app.require_subcommand(1);

  vsvpc::RunSpec spec;
  std::vector<std::string> variant_names = {"Classical", "VisionSafe",
                                            "VisionSafeEnhanced"};
  std::vector<std::uint64_t> seeds = {1};
  bool no_logs = false;
  bool no_report = false;

  auto* run = app.add_subcommand("run", "run episodes and write logs/reports");
  run->add_option("scenario", spec.scenario_path, "scenario JSON file")
      ->required();
  run->add_option("-v,--variants", variant_names,
                  "controller variants (Classical, VisionSafe, "
                  "VisionSafeEnhanced, FullyTracking)");
  run->add_option("-s,--seeds", seeds, "master seeds, one episode each");
  run->add_option("-o,--output", spec.output_dir, "output directory");
  run->add_flag("--no-emit-logs", no_logs, "skip CSV trajectory logs");
  run->add_flag("--no-emit-report", no_report, "skip metric reports");
  run->add_option("--gp-offline-samples", spec.gp_offline_samples,
                  "offline GP samples collected before the episode");
  run->add_option("--gp-window", spec.gp_window,
                  "sliding window size for online GP updates");

  std::string report_dir;
  auto* compare =
      app.add_subcommand("compare", "aggregate reports into a comparison table");
  compare->add_option("reports", report_dir, "directory with report_*.json")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    spec.emit_logs = !no_logs;
    spec.emit_report = !no_report;
    spec.seeds = seeds;
    spec.variants.clear();
    for (const auto& name : variant_names) {
      const auto v = vsvpc::variant_from_string(name);
      if (!v) {
        std::cerr << "error: unknown variant '" << name << "'\n";
        return 2;
      }
      spec.variants.push_back(*v);
    }
    try {
      return vsvpc::cmd_run(spec);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return vsvpc::cmd_compare(report_dir);
}
