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

#include "dqsim/output.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dqs {

std::string format_number(double x) {
  if (x == 0.0) return "0";
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string config_hash(const nlohmann::json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("table row width does not match its columns");
  rows.push_back(std::move(row));
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}

}  // namespace

std::string render_csv(const Table& table, const std::vector<std::string>& header_lines) {
  std::ostringstream os;
  for (const auto& line : header_lines) os << "# " << line << '\n';
  for (std::size_t k = 0; k < table.columns.size(); ++k) os << (k ? "," : "") << table.columns[k];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << cell_text(row[k]);
    os << '\n';
  }
  return os.str();
}

nlohmann::json table_to_json(const Table& table, const nlohmann::json& metadata) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) {
      if (const auto* d = std::get_if<double>(&c)) {
        // Same rounding as the CSV so both formats carry identical values.
        r.push_back(std::isfinite(*d) ? nlohmann::json(std::stod(format_number(*d))) : nlohmann::json());
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(r));
  }
  return {{"metadata", metadata}, {"columns", table.columns}, {"rows", rows}};
}

Table trajectory_table(const Trajectory& traj) {
  Table t;
  const std::size_t n = traj.samples.empty() ? 2 : traj.samples.front().sx_ideal.size();
  t.columns = {"theta", "wall_time_s", "fidelity"};
  for (std::size_t j = 1; j <= n; ++j) {
    t.columns.push_back("sx_" + std::to_string(j) + "_ideal");
    t.columns.push_back("sx_" + std::to_string(j) + "_device");
  }
  t.columns.push_back("leakage");
  for (const auto& s : traj.samples) {
    std::vector<Cell> row = {s.theta, s.wall_time, s.fidelity};
    for (std::size_t j = 0; j < n; ++j) {
      row.emplace_back(s.sx_ideal.at(j));
      row.emplace_back(s.sx_device.at(j));
    }
    row.emplace_back(s.leakage);
    t.add_row(std::move(row));
  }
  return t;
}

std::string gnuplot_script(const std::string& data_file, const Table& table,
                           const std::vector<std::string>& y_columns, const std::string& title) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key autotitle columnhead\n"
     << "set title '" << title << "'\n"
     << "set xlabel '" << (table.columns.empty() ? "x" : table.columns.front()) << "'\n"
     << "plot";
  bool first = true;
  for (const auto& y : y_columns) {
    std::size_t col = 0;
    while (col < table.columns.size() && table.columns[col] != y) ++col;
    if (col == table.columns.size()) throw std::invalid_argument("gnuplot_script: unknown column " + y);
    os << (first ? " " : ", \\\n     ") << "'" << data_file << "' using 1:" << col + 1 << " with lines";
    first = false;
  }
  os << '\n';
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace dqs
