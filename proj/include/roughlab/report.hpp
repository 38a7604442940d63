#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "roughlab/budget.hpp"
#include "roughlab/inequality.hpp"
#include "roughlab/scaling.hpp"
#include "roughlab/solver.hpp"

namespace roughlab {

/// Fixed-column table; numbers are stored already formatted.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  explicit CsvTable(std::vector<std::string> header) : columns(std::move(header)) {}
  /// Throws ConfigurationError when the cell count differs from the column count.
  void add_row(std::vector<std::string> cells);
};

/// %.17g: seventeen significant digits, enough to round-trip any double.
std::string format_number(double value);
std::string format_number(std::size_t value);
std::string format_bool(bool value);

std::string to_csv(const CsvTable& table);
/// Writes text to path; I/O failures raise std::system_error carrying the OS message.
void write_text_file(const std::string& path, const std::string& text);
void write_csv(const std::string& path, const CsvTable& table);
void write_json(const std::string& path, const nlohmann::json& value);

/// One row per Picard step: iteration k >= 1 with the increment ||theta^(k) - theta^(k-1)||
/// and the contraction factor relative to the previous increment, where the increment of
/// theta^(0) is its own norm (the Picard map starts from zero). m iterates give m - 1 rows.
CsvTable trace_table(const SolutionTrace& trace);
CsvTable ratio_table(const InequalityReport& report);
CsvTable beta_table(const std::vector<BetaReport>& reports);
CsvTable scan_table(const ScanResult& scan);
CsvTable scaling_table(const ScalingReport& report);
/// (quantity, space, exponent, gamma, value, argmax_time, boundary_flag) per weighted norm.
CsvTable norm_table(const std::vector<std::pair<std::string, WeightedSupNorm>>& norms);

nlohmann::json to_json(const BudgetDecision& decision);
nlohmann::json to_json(const InequalityReport& report);
nlohmann::json to_json(const BetaReport& report);
nlohmann::json to_json(const ScalingReport& report);
nlohmann::json to_json(const ScanResult& scan);
nlohmann::json to_json(const WeightedSupNorm& norm);
/// Summary without iterates.
nlohmann::json to_json(const SolutionTrace& trace);

}  // namespace roughlab
