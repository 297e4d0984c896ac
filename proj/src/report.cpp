#include "pslab/report.hpp"

#include <charconv>

#include "pslab/error.hpp"

namespace pslab {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

// Accepts decimals and p/q strings such as "3/2".
double parse_number(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

}  // namespace

void write_csv(std::span<const ExperimentReport> rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << csv_quote(r.experiment) << ',' << csv_quote(r.params.dump()) << ','
        << format_double(r.observed) << ',' << format_double(r.reference) << ','
        << format_double(r.ratio) << ',' << r.runtime_ms << '\n';
  }
}

nlohmann::ordered_json to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["params"] = r.params;
  j["observed"] = r.observed;
  j["reference"] = r.reference;
  j["ratio"] = r.ratio;
  j["runtime_ms"] = r.runtime_ms;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  if (!r.extra.empty()) j["extra"] = r.extra;
  return j;
}

void write_json(std::span<const ExperimentReport> rows, std::ostream& out) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  out << arr.dump(2) << '\n';
}

void emit_plot_data(const PlotSeries& series, std::ostream& out) {
  if (series.rows.empty()) throw ValidationError("emit_plot_data: empty series");
  if (series.columns.size() < 2) throw ValidationError("emit_plot_data: need at least two columns");
  for (const auto& row : series.rows) {
    if (row.size() != series.columns.size()) throw ValidationError("emit_plot_data: ragged row");
  }
  if (!series.title.empty()) out << "# " << series.title << '\n';
  out << '#';
  for (std::size_t i = 0; i < series.columns.size(); ++i) out << (i ? "\t" : " ") << series.columns[i];
  out << '\n';
  for (const auto& row : series.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << format_double(row[i]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("emit_plot_data: write failed");
}

PlotSeries ratio_series(std::span<const ExperimentReport> rows, const std::string& key) {
  PlotSeries s{"", {key, "ratio"}, {}};
  if (!rows.empty()) s.title = rows.front().experiment;
  for (const auto& r : rows) {
    const auto& v = r.params.at(key);
    s.rows.push_back({v.is_number() ? v.get<double>() : parse_number(v.get<std::string>()), r.ratio});
  }
  return s;
}

}  // namespace pslab
