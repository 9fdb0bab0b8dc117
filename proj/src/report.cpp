/*
 * Copyright 2026 The coaxsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "coaxsim/report.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "coaxsim/rng.hpp"
#include "coaxsim/version.hpp"

namespace coaxsim {

using json = nlohmann::ordered_json;

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw std::invalid_argument("column '" + name + "' is not numeric");
}

std::string format_cell(const Cell& c) {
  struct {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.4f", d);
      return buf;
    }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  } visit;
  return std::visit(visit, c);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return json(v); }, c);
}

// Plain scalars become numbers or booleans where they parse as such;
// quoted scalars stay strings.
json yaml_to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Map: {
      json o = json::object();
      for (const auto& kv : n) o[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return o;
    }
    case YAML::NodeType::Sequence: {
      json a = json::array();
      for (const auto& item : n) a.push_back(yaml_to_json(item));
      return a;
    }
    case YAML::NodeType::Scalar: {
      const std::string& s = n.Scalar();
      if (n.Tag() == "!") return s;
      if (s == "true") return true;
      if (s == "false") return false;
      std::int64_t i = 0;
      if (auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i); ec == std::errc() && p == s.data() + s.size()) {
        return i;
      }
      double d = 0;
      if (auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d); ec == std::errc() && p == s.data() + s.size()) {
        return d;
      }
      return s;
    }
    default:
      return nullptr;
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path + ": " + std::strerror(errno));
  out << contents;
  out.flush();
  if (!out) throw std::runtime_error("error while writing " + path);
}

}  // namespace

std::string to_csv(const Report& report) {
  std::ostringstream os;
  os << "# coaxsim " << kVersion << "\n";
  os << "# experiment: " << report.experiment << "\n";
  os << "# seed: " << report.seed << "\n";
  os << "# prng: " << Rng::kAlgorithm << "\n";
  for (const auto& [k, v] : report.summary) os << "# " << k << ": " << format_cell(v) << "\n";
  for (const auto& w : report.warnings) os << "# warning: " << w << "\n";
  os << "# config:\n";
  std::istringstream cfg(report.config_yaml);
  for (std::string line; std::getline(cfg, line);) os << "#   " << line << "\n";

  for (std::size_t i = 0; i < report.table.columns.size(); ++i) {
    os << (i ? "," : "") << csv_field(report.table.columns[i]);
  }
  os << "\n";
  for (const auto& row : report.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(format_cell(row[i]));
    os << "\n";
  }
  return os.str();
}

std::string to_json(const Report& report) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = "coaxsim";
  j["version"] = std::string(kVersion);
  j["experiment"] = report.experiment;
  j["seed"] = report.seed;
  j["prng"] = std::string(Rng::kAlgorithm);
  j["config"] = yaml_to_json(YAML::Load(report.config_yaml));
  json summary = json::object();
  for (const auto& [k, v] : report.summary) summary[k] = cell_json(v);
  j["summary"] = summary;
  json rows = json::array();
  for (const auto& row : report.table.rows) {
    json o = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) o[report.table.columns[i]] = cell_json(row[i]);
    rows.push_back(o);
  }
  j["results"] = rows;
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

std::string to_text(const Report& report) {
  const Table& t = report.table;
  std::vector<std::vector<std::string>> cells;
  cells.push_back(t.columns);
  for (const auto& row : t.rows) {
    std::vector<std::string> r;
    for (const auto& c : row) r.push_back(format_cell(c));
    cells.push_back(r);
  }
  std::vector<std::size_t> width(t.columns.size(), 0);
  for (const auto& r : cells) {
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream os;
  for (const auto& r : cells) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << "  ";
      const std::size_t pad = width[i] - r[i].size();
      // Text left-aligned in the first column, everything else right-aligned.
      if (i == 0) {
        os << r[i] << std::string(pad, ' ');
      } else {
        os << std::string(pad, ' ') << r[i];
      }
    }
    os << "\n";
  }
  for (const auto& [k, v] : report.summary) os << k << ": " << format_cell(v) << "\n";
  return os.str();
}

std::vector<std::string> write_report(const Report& report, const std::string& dir, ReportFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  std::vector<std::string> written;
  const std::filesystem::path base(dir);
  const std::string main = (base / (report.experiment + (format == ReportFormat::kCsv ? ".csv" : ".json"))).string();
  write_file(main, format == ReportFormat::kCsv ? to_csv(report) : to_json(report));
  written.push_back(main);
  for (const auto& [name, contents] : report.attachments) {
    const std::string path = (base / name).string();
    write_file(path, contents);
    written.push_back(path);
  }
  return written;
}

}  // namespace coaxsim
