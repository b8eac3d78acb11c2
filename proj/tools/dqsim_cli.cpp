// Copyright 2026 The dqsim Authors
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

#include <algorithm>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "dqsim/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dqsim: digital quantum simulation of spin models on transmon-resonator devices"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
  std::size_t threads = std::max(1U, std::thread::hardware_concurrency());
  std::string format;
  bool print_config = false;

  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (default: $DQSIM_OUT_DIR or ./dqsim_out)");
  app.add_option("--set", sets, "Dotted-path override, e.g. --set noise.kappa=0 (repeatable)");
  app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--print-config", print_config, "Print the resolved configuration and exit");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"fig2-heisenberg", "Digital error of the three-qubit Heisenberg protocol"},
      {"fig2-tfim", "Digital error of the transverse-field Ising protocol"},
      {"fig3", "Two-transmon Heisenberg dynamics on the noisy device model"},
      {"table1", "Execution times and Trotter error bounds"},
      {"bounds", "Measured digital error against the Trotter bounds"},
  };
  for (const auto& [name, desc] : commands) app.add_subcommand(name, desc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string experiment = app.get_subcommands().front()->get_name();

  dqs::ExperimentConfig cfg;
  try {
    if (!out_dir.empty()) sets.push_back("output.dir=" + nlohmann::json(out_dir).dump());
    if (!format.empty()) sets.push_back("output.format=" + format);
    cfg = config_path.empty() ? dqs::resolve_config(nlohmann::json::object(), sets, experiment)
                              : dqs::load_config(config_path, sets, experiment);
  } catch (const dqs::ConfigError& e) {
    std::cerr << "dqsim: " << e.what() << "\n";
    return kExitConfig;
  }
  if (print_config) {
    nlohmann::json echo = cfg.resolved;
    echo["output"] = {{"dir", cfg.out_dir}, {"format", cfg.format}, {"gnuplot", cfg.gnuplot}};
    std::cout << echo.dump(2) << "\n";
    return 0;
  }

  try {
    const dqs::ExperimentResult result = dqs::run_experiment(cfg, threads);
    dqs::write_result(result, cfg.out_dir);
    std::cout << result.report;
    for (const auto& f : result.files) std::cout << "wrote " << (std::filesystem::path(cfg.out_dir) / f.name).string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "dqsim: " << experiment << " failed: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
