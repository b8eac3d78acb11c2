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

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "dqsim/dynamics.hpp"

namespace dqs {

/// 9 significant digits, '.' separator; -0 is written as 0.
std::string format_number(double x);

/// FNV-1a 64-bit hash of the compact JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// '#'-prefixed metadata lines followed by a header row and the data, LF endings.
std::string render_csv(const Table& table, const std::vector<std::string>& header_lines);

/// {"metadata": ..., "columns": [...], "rows": [[...], ...]}
nlohmann::json table_to_json(const Table& table, const nlohmann::json& metadata);

Table trajectory_table(const Trajectory& traj);

/// Plain-text gnuplot script plotting `y_columns` against the first column.
std::string gnuplot_script(const std::string& data_file, const Table& table,
                           const std::vector<std::string>& y_columns, const std::string& title);

/// Writes text atomically enough for batch use: to `path.tmp`, then renamed.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dqs
