// Copyright 2026 The allocflow Authors
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

#ifndef ALLOCFLOW_IO_HPP_
#define ALLOCFLOW_IO_HPP_

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "allocflow/errors.hpp"
#include "allocflow/model.hpp"
#include "allocflow/solver.hpp"
#include "allocflow/stats.hpp"

namespace allocflow {
namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t pos = 0; pos <= line.size(); ++pos) {
    if (pos == line.size() || line[pos] == ',') {
      fields.push_back(trim(line.substr(start, pos - start)));
      start = pos + 1;
    }
  }
  return fields;
}

inline double parse_double(std::string_view field, std::size_t line_number) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_number) + ": '" +
                    std::string(field) + "' is not a number");
  }
  return value;
}

inline std::int64_t parse_int(std::string_view field,
                              std::size_t line_number) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_number) + ": '" +
                    std::string(field) + "' is not an integer");
  }
  return value;
}

}  // namespace detail

/// Headerless CSV outcome matrix: one row per recipient, one decimal
/// column per treatment. Blank lines are ignored.
inline std::vector<std::vector<double>> read_outcome_matrix(
    std::istream& in) {
  std::vector<std::vector<double>> matrix;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (detail::trim(line).empty()) continue;
    std::vector<double> row;
    for (std::string_view field : detail::split_csv_line(line)) {
      row.push_back(detail::parse_double(field, line_number));
    }
    matrix.push_back(std::move(row));
  }
  return matrix;
}

/// Baseline allocation file: one treatment index per line.
inline std::vector<int> read_baseline(std::istream& in) {
  std::vector<int> baseline;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    baseline.push_back(
        static_cast<int>(detail::parse_int(trimmed, line_number)));
  }
  return baseline;
}

/// Capacity specification: either a single non-negative integer applied
/// uniformly to all `num_treatments` treatments, or a comma-separated list
/// with one entry per treatment.
inline std::vector<std::int64_t> parse_capacity_spec(std::string_view spec,
                                                     int num_treatments) {
  std::vector<std::int64_t> capacities;
  for (std::string_view field : detail::split_csv_line(spec)) {
    capacities.push_back(detail::parse_int(field, 1));
  }
  if (capacities.size() == 1 && num_treatments != 1) {
    capacities.assign(num_treatments, capacities.front());
  }
  if (static_cast<int>(capacities.size()) != num_treatments) {
    throw Error(ErrorCode::kCapacityLengthMismatch,
                "capacity spec lists " + std::to_string(capacities.size()) +
                    " treatments, matrix has " +
                    std::to_string(num_treatments));
  }
  return capacities;
}

/// Grouped outcome CSV with columns group,arm,outcome. A first line whose
/// third field is literally "outcome" is treated as a header and skipped.
/// Groups and arms appear in the report in first-occurrence order.
inline GroupedOutcomes read_grouped_outcomes(std::istream& in) {
  GroupedOutcomes data;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 3) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_number) +
                      ": expected group,arm,outcome");
    }
    if (line_number == 1 && fields[2] == "outcome") continue;
    const double value = detail::parse_double(fields[2], line_number);

    GroupedOutcomes::Group* group = nullptr;
    for (auto& g : data.groups) {
      if (g.label == fields[0]) {
        group = &g;
        break;
      }
    }
    if (group == nullptr) {
      data.groups.push_back({std::string(fields[0]), {}});
      group = &data.groups.back();
    }
    GroupedOutcomes::Arm* arm = nullptr;
    for (auto& a : group->arms) {
      if (a.label == fields[1]) {
        arm = &a;
        break;
      }
    }
    if (arm == nullptr) {
      group->arms.push_back({std::string(fields[1]), {}});
      arm = &group->arms.back();
    }
    arm->values.push_back(value);
  }
  return data;
}

/// Writes a matrix in the same headerless CSV format read_outcome_matrix
/// accepts, six decimals per entry.
inline void write_outcome_matrix(const std::vector<std::vector<double>>& m,
                                 std::ostream& out) {
  char buffer[64];
  for (const auto& row : m) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.6f", row[j]);
      if (j > 0) out << ',';
      out << buffer;
    }
    out << '\n';
  }
}

/// Stable JSON schema for solve results:
/// {assignment: [...], total, mean, iterations, quantization_bound}.
inline nlohmann::json solve_report_json(const SolveReport& report) {
  return nlohmann::json{
      {"assignment", report.allocation.assignment},
      {"total", report.value.total},
      {"mean", report.value.mean},
      {"iterations", report.iterations},
      {"quantization_bound", report.quantization_bound},
  };
}

/// Pareto solve results add the per-recipient outcome deltas against the
/// baseline, all guaranteed non-negative.
inline nlohmann::json pareto_report_json(const SolveReport& report,
                                         const ProblemInstance& instance,
                                         const Allocation& baseline) {
  nlohmann::json json = solve_report_json(report);
  std::vector<double> delta(report.allocation.assignment.size());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    delta[i] = instance.outcomes[i][report.allocation.assignment[i]] -
               instance.outcomes[i][baseline.assignment[i]];
  }
  json["delta"] = delta;
  return json;
}

inline nlohmann::json mechanism_comparison_json(
    const MechanismComparison& comparison) {
  return nlohmann::json{
      {"actual_mean", comparison.actual.mean},
      {"greedy_mean", comparison.greedy.mean},
      {"optimal_mean", comparison.optimal.mean},
      {"pareto_mean", comparison.pareto.mean},
      {"actual_total", comparison.actual.total},
      {"greedy_total", comparison.greedy.total},
      {"optimal_total", comparison.optimal.total},
      {"pareto_total", comparison.pareto.total},
  };
}

/// JSON twin of permutation_report_text; field set is part of the
/// interface contract.
inline nlohmann::json permutation_report_json(
    const PermutationReport& report) {
  return nlohmann::json{
      {"observed", report.observed},
      {"excess", report.excess},
      {"p_value", report.p_value},
      {"replicates", report.replicates},
      {"seed", report.seed},
  };
}

}  // namespace allocflow

#endif  // ALLOCFLOW_IO_HPP_
