#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hfo/harness.hpp"

namespace hfo {

/// Machine-readable form of a run. Field order and number formatting are
/// stable, so two identical runs differ only under "timing".
nlohmann::ordered_json to_json(const EvalReport& report);

/// One line of the comparison table.
struct ReportRow {
  std::string model;
  Setting setting = Setting::Offline;
  MetricsReport headline;
  TimingStats timing;
};

ReportRow summarize(const EvalReport& report);
/// Reads back a report written by to_json. Throws ParseError on a missing
/// or mistyped field.
ReportRow parse_report_row(const nlohmann::json& j);
ReportRow load_report_row(const std::filesystem::path& path);

/// Markdown table: Model | T F1m | T Precm | T Recm | C F1 | C Prec | C Rec |
/// F F1 | F Prec | F Rec | Time. With two or more rows the best value of each
/// metric column is wrapped in ** (all rows on a tie).
std::string render_table(std::span<const ReportRow> rows);

/// Column values in table order, T F1m first; used for best-value marking.
std::vector<double> metric_columns(const ReportRow& row);

}  // namespace hfo
