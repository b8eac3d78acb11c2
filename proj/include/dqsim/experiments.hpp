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

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dqsim/device.hpp"
#include "dqsim/dynamics.hpp"
#include "dqsim/lindblad.hpp"
#include "dqsim/model_hamiltonians.hpp"
#include "dqsim/protocol_compiler.hpp"

namespace dqs {

/// One or more configuration problems, each prefixed with its key path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

enum class Experiment { Fig2Heisenberg, Fig2Tfim, Fig3, Table1, Bounds };

std::string to_string(Experiment e);
/// Throws ConfigError on an unknown tag.
Experiment parse_experiment(const std::string& s);

struct Fig2Panel {
  std::string name;
  double epsilon = 0.0;
  std::vector<std::size_t> steps;
};

/// Fully resolved configuration. Frequencies in the JSON form are in Hz and
/// converted to rad/s here.
struct ExperimentConfig {
  Experiment experiment = Experiment::Fig3;

  std::size_t n = 3;
  double j = 0.0;  // rad/s
  double b = 0.0;  // rad/s
  Boundary boundary = Boundary::Open;

  std::vector<double> thetas;
  std::string initial_state;
  std::vector<Fig2Panel> panels;

  std::vector<std::pair<cplx, cplx>> fig3_initial;
  double leakage_warning = 0.1;
  DeviceParams device;
  CouplingCalibration calibration = CouplingCalibration::Spectral;
  NoiseParams noise;
  LindbladOptions integrator;

  GateTimes gate_times;
  GateErrorModel gate_errors;

  std::vector<std::size_t> table_n;
  double table_theta = 0.0;
  std::size_t table_steps = 1;

  std::vector<std::size_t> bounds_n;
  std::vector<std::size_t> bounds_steps;

  std::string out_dir;
  std::string format = "csv";
  bool gnuplot = false;

  /// Resolved physics configuration (everything except "output"); echoed in
  /// every output file and hashed.
  nlohmann::json resolved;
};

/// The configuration schema with its defaults. Null leaves are filled per
/// experiment during resolution.
nlohmann::json default_config();

/// Parses JSON text; an empty or all-whitespace text is {}. Syntax errors are
/// reported as `<source>:<line>:<column>: ...`.
nlohmann::json parse_config_text(const std::string& text, const std::string& source);

/// Merges `user` and `--set` style overrides ("a.b=value") onto the defaults,
/// rejects unknown keys and validates every field. `experiment`, when given,
/// must agree with the file. Throws ConfigError listing every problem.
ExperimentConfig resolve_config(const nlohmann::json& user, const std::vector<std::string>& overrides,
                                const std::optional<std::string>& experiment = std::nullopt);

/// Reads `path` and resolves it as above.
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides,
                             const std::optional<std::string>& experiment = std::nullopt);

std::vector<double> linspace(double lo, double hi, std::size_t points);

/// Alternating "udud..." of length n.
std::string default_spin_pattern(std::size_t n);

struct OutputFile {
  std::string name;
  std::string contents;
};

struct ExperimentResult {
  std::vector<OutputFile> files;
  nlohmann::json summary;
  /// Human-readable summary for the terminal.
  std::string report;
};

/// First theta at which loss exceeds `line`, if any.
std::optional<double> crossover_theta(const std::vector<double>& thetas, const std::vector<double>& loss,
                                      double line);

ExperimentResult run_fig2(const ExperimentConfig& cfg, std::size_t threads = 1);
ExperimentResult run_fig3(const ExperimentConfig& cfg, std::size_t threads = 1);
ExperimentResult run_table1(const ExperimentConfig& cfg);
ExperimentResult run_bounds(const ExperimentConfig& cfg, std::size_t threads = 1);
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t threads = 1);

/// Writes every file of `result` plus summary.json into `dir`.
void write_result(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace dqs
