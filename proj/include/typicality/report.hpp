#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "typicality/errors.hpp"
#include "typicality/version.hpp"

namespace typicality {

using Json = nlohmann::ordered_json;

// One named table of equal-length numeric columns.
struct Series {
  std::string name;
  std::vector<std::pair<std::string, std::vector<double>>> columns;

  std::size_t rows() const {
    return columns.empty() ? 0 : columns.front().second.size();
  }

  void add_column(std::string column_name, std::vector<double> values) {
    if (!columns.empty() && values.size() != rows()) {
      throw std::domain_error("Series '" + name + "': column '" + column_name +
                              "' has " + std::to_string(values.size()) +
                              " rows, expected " + std::to_string(rows()));
    }
    columns.emplace_back(std::move(column_name), std::move(values));
  }
};

// Result of one seeded experiment: every input (including the seed) in
// params, tabular output in series, headline scalars in summary. For fixed
// params the whole object is bit-reproducible.
struct ExperimentReport {
  std::string name;
  Json params = Json::object();
  std::vector<Series> series;
  Json summary = Json::object();
};

inline Json to_json(const ExperimentReport& report) {
  Json j;
  j["name"] = report.name;
  j["version"] = kVersion;
  j["params"] = report.params;
  j["summary"] = report.summary;
  Json series = Json::object();
  for (const Series& s : report.series) {
    Json cols = Json::object();
    for (const auto& [col, values] : s.columns) {
      cols[col] = values;
    }
    series[s.name] = std::move(cols);
  }
  j["series"] = std::move(series);
  return j;
}

namespace detail {

// Shortest-round-trip-ish fixed formatting; stable across runs, parses back
// to the same double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string scalar_comment_value(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace detail

// Write <name>.json plus one <name>__<series>.csv per series into `dir`
// (created if missing). CSVs open with '# key=value' comment lines carrying
// the name, tool version, and every param, so each file can be traced back to
// the run that made it. Returns the paths written.
inline std::vector<std::filesystem::path> write_report(
    const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory '" + dir.string() +
                  "': " + ec.message());
  }

  std::vector<std::filesystem::path> written;

  const std::filesystem::path json_path = dir / (report.name + ".json");
  {
    std::ofstream out(json_path);
    if (!out) {
      throw IoError("cannot write '" + json_path.string() + "'");
    }
    out << to_json(report).dump(2) << '\n';
  }
  written.push_back(json_path);

  for (const Series& s : report.series) {
    const std::filesystem::path csv_path =
        dir / (report.name + "__" + s.name + ".csv");
    std::ofstream out(csv_path);
    if (!out) {
      throw IoError("cannot write '" + csv_path.string() + "'");
    }
    out << "# name=" << report.name << '\n';
    out << "# version=" << kVersion << '\n';
    for (const auto& [key, value] : report.params.items()) {
      out << "# " << key << '=' << detail::scalar_comment_value(value) << '\n';
    }
    for (std::size_t c = 0; c < s.columns.size(); ++c) {
      out << (c ? "," : "") << s.columns[c].first;
    }
    out << '\n';
    const std::size_t n = s.rows();
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < s.columns.size(); ++c) {
        out << (c ? "," : "") << detail::format_double(s.columns[c].second[r]);
      }
      out << '\n';
    }
    written.push_back(csv_path);
  }
  return written;
}

}  // namespace typicality
