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

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "coaxsim/scenario.hpp"

namespace coaxsim {

/// A table cell. Doubles print with four decimals in CSV and text.
using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Index of `column`; throws std::out_of_range when absent.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

/// The output of one experiment: a result table, headline values, and the
/// effective configuration that produced them.
struct Report {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string config_yaml;
  Table table;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> warnings;
  /// Extra CSV files (name, contents), e.g. latency CDFs.
  std::vector<std::pair<std::string, std::string>> attachments;
};

std::string format_cell(const Cell& c);

/// `#`-prefixed header (tool, version, seed, PRNG, config, summary) followed
/// by the table with a column-name row.
std::string to_csv(const Report& report);
std::string to_json(const Report& report);
/// Column-aligned table plus summary lines, for terminals.
std::string to_text(const Report& report);

/// Writes `<dir>/<experiment>.<csv|json>` and any attachments; returns the
/// paths written. Throws std::runtime_error naming the path on I/O failure.
std::vector<std::string> write_report(const Report& report, const std::string& dir, ReportFormat format);

}  // namespace coaxsim
