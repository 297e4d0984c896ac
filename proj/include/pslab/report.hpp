#pragma once

// Serialization of experiment rows: CSV, JSON and tab-separated plot data.

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pslab/experiments.hpp"

namespace pslab {

/// Shortest round-trip decimal form of v.
std::string format_double(double v);

inline constexpr const char* kCsvHeader = "experiment,param_json,observed,reference,ratio,runtime_ms";

void write_csv(std::span<const ExperimentReport> rows, std::ostream& out);
void write_json(std::span<const ExperimentReport> rows, std::ostream& out);
nlohmann::ordered_json to_json(const ExperimentReport& r);

/// A table of numeric columns for external plotting.
struct PlotSeries {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Writes "# title" then "# col1\tcol2..." followed by one tab-separated
/// line per row. Throws ValidationError on an empty series or ragged rows.
void emit_plot_data(const PlotSeries& series, std::ostream& out);

/// Series of (params[key], ratio) over report rows.
PlotSeries ratio_series(std::span<const ExperimentReport> rows, const std::string& key);

}  // namespace pslab
