#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "typicality/data_matrix.hpp"
#include "typicality/errors.hpp"
#include "typicality/random.hpp"
#include "typicality/report.hpp"
#include "typicality/stats.hpp"

namespace typicality {

inline const std::set<std::string>& default_missing_tokens() {
  static const std::set<std::string> tokens = {"", "NA"};
  return tokens;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_line(const std::string& line,
                                           char delimiter) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

// Full-token, locale-independent numeric parse; rejects non-finite values so
// literal "nan"/"inf" text is kept as text rather than silently becoming data.
inline bool parse_number(const std::string& token, double& out) {
  if (token.empty()) return false;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (*begin == '+') ++begin;
  if (begin == end) return false;
  const auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc() && result.ptr == end && std::isfinite(out);
}

}  // namespace detail

// Read a delimited text table with a header row. Lines starting with '#' are
// comments. Cells matching missing_tokens are masked; cells that fail numeric
// parsing are kept as text for clean_likert to resolve.
inline DataMatrix load_table(
    const std::filesystem::path& path,
    const std::set<std::string>& missing_tokens = default_missing_tokens(),
    char delimiter = ',') {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }

  std::vector<std::string> labels;
  std::vector<std::vector<std::string>> rows;
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') continue;
    std::vector<std::string> fields = detail::split_line(line, delimiter);
    if (labels.empty()) {
      labels = std::move(fields);
      continue;
    }
    if (fields.size() != labels.size()) {
      throw ParseError(line_number,
                       "expected " + std::to_string(labels.size()) +
                           " fields, got " + std::to_string(fields.size()));
    }
    rows.push_back(std::move(fields));
  }
  if (labels.empty()) {
    throw ParseError(line_number, "no header row found");
  }
  if (rows.empty()) {
    throw std::domain_error("load_table: '" + path.string() +
                            "' has a header but no data rows");
  }

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(labels.size());
  DataMatrix data;
  data.values = Eigen::MatrixXd::Constant(n, d, DataMatrix::missing_sentinel());
  data.column_labels = labels;
  data.missing_mask = BoolMask::Constant(n, d, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const std::string& token =
          rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (missing_tokens.count(token)) {
        data.missing_mask(i, j) = true;
        continue;
      }
      double value = 0.0;
      if (detail::parse_number(token, value)) {
        data.values(i, j) = value;
      } else {
        data.text_cells[{i, j}] = token;
      }
    }
  }
  return data;
}

// Write a table in the format load_table reads: optional '#' comment block,
// header row, masked cells empty, text cells verbatim.
inline void write_table(const DataMatrix& data,
                        const std::filesystem::path& path,
                        char delimiter = ',',
                        const std::vector<std::string>& comments = {}) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write '" + path.string() + "'");
  }
  for (const std::string& comment : comments) {
    out << "# " << comment << '\n';
  }
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    if (j) out << delimiter;
    out << data.column_name(j);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j) out << delimiter;
      if (data.missing_mask(i, j)) continue;
      const auto text = data.text_cells.find({i, j});
      if (text != data.text_cells.end()) {
        out << text->second;
      } else {
        out << detail::format_double(data.values(i, j));
      }
    }
    out << '\n';
  }
}

// Per-column text-to-integer endpoint mappings. The key "*" is a fallback
// applied to every column; column-specific entries override it token-wise.
using EndpointMap = std::map<std::string, std::map<std::string, int>>;

struct CleaningReport {
  Eigen::Index n_rows = 0;
  Eigen::Index n_cols_input = 0;
  Eigen::Index n_cols_kept = 0;
  std::vector<std::string> dropped_columns;
  // Mappings actually applied, per kept column: token -> integer.
  std::map<std::string, std::map<std::string, int>> label_mappings;
  std::vector<double> imputation_rate_per_column;  // filled by the caller
  double imputation_rate_overall = 0.0;            // after mean_impute
};

inline Json to_json(const CleaningReport& report) {
  Json j;
  j["n_rows"] = report.n_rows;
  j["n_cols_input"] = report.n_cols_input;
  j["n_cols_kept"] = report.n_cols_kept;
  j["dropped_columns"] = report.dropped_columns;
  j["label_mappings"] = report.label_mappings;
  j["imputation_rate_per_column"] = report.imputation_rate_per_column;
  j["imputation_rate_overall"] = report.imputation_rate_overall;
  return j;
}

// Resolve residual text cells. A column whose every text token is covered by
// its mapping (column-specific entries over the "*" fallback) is converted in
// place; a column with text and no mapping of its own is dropped and logged;
// a column that has its own mapping but still contains an unmapped token is
// an error, because the mapping was supposed to cover it.
inline std::pair<DataMatrix, CleaningReport> clean_likert(
    const DataMatrix& data, const EndpointMap& endpoint_map) {
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();

  const auto fallback_it = endpoint_map.find("*");
  const std::map<std::string, int>* fallback =
      fallback_it == endpoint_map.end() ? nullptr : &fallback_it->second;

  CleaningReport report;
  report.n_rows = n;
  report.n_cols_input = d;

  // Distinct text tokens per column.
  std::vector<std::set<std::string>> tokens(static_cast<std::size_t>(d));
  for (const auto& [cell, token] : data.text_cells) {
    tokens[static_cast<std::size_t>(cell.second)].insert(token);
  }

  std::vector<Eigen::Index> kept;
  std::vector<std::map<std::string, int>> applied(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    const std::string label = data.column_name(j);
    const auto& column_tokens = tokens[static_cast<std::size_t>(j)];
    if (column_tokens.empty()) {
      kept.push_back(j);
      continue;
    }
    const auto own_it = endpoint_map.find(label);
    const std::map<std::string, int>* own =
        own_it == endpoint_map.end() ? nullptr : &own_it->second;

    bool covered = true;
    std::string first_unmapped;
    std::map<std::string, int> mapping;
    for (const std::string& token : column_tokens) {
      if (own && own->count(token)) {
        mapping[token] = own->at(token);
      } else if (fallback && fallback->count(token)) {
        mapping[token] = fallback->at(token);
      } else {
        covered = false;
        if (first_unmapped.empty()) first_unmapped = token;
      }
    }
    if (covered) {
      kept.push_back(j);
      applied[static_cast<std::size_t>(j)] = std::move(mapping);
      continue;
    }
    if (own) {
      throw PipelineError(label, "unmapped text token '" + first_unmapped + "'");
    }
    report.dropped_columns.push_back(label);
  }

  DataMatrix out;
  const Eigen::Index k = static_cast<Eigen::Index>(kept.size());
  out.values.resize(n, k);
  out.missing_mask.resize(n, k);
  for (Eigen::Index jj = 0; jj < k; ++jj) {
    const Eigen::Index j = kept[static_cast<std::size_t>(jj)];
    out.values.col(jj) = data.values.col(j);
    out.missing_mask.col(jj) = data.missing_mask.col(j);
    out.column_labels.push_back(data.column_name(j));
    const auto& mapping = applied[static_cast<std::size_t>(j)];
    if (!mapping.empty()) {
      report.label_mappings[data.column_name(j)] = mapping;
    }
  }
  // Substitute mapped integers for the text cells of kept columns.
  std::vector<Eigen::Index> new_index(static_cast<std::size_t>(d), -1);
  for (Eigen::Index jj = 0; jj < k; ++jj) {
    new_index[static_cast<std::size_t>(kept[static_cast<std::size_t>(jj)])] = jj;
  }
  for (const auto& [cell, token] : data.text_cells) {
    const Eigen::Index jj = new_index[static_cast<std::size_t>(cell.second)];
    if (jj < 0) continue;
    const auto& mapping = applied[static_cast<std::size_t>(cell.second)];
    out.values(cell.first, jj) = mapping.at(token);
  }
  report.n_cols_kept = k;
  return {std::move(out), std::move(report)};
}

// Replace each masked cell by the mean of its column's observed cells.
// Returns the imputed table and the per-column imputation rates.
inline std::pair<DataMatrix, std::vector<double>> mean_impute(
    const DataMatrix& data) {
  if (data.has_text()) {
    const Eigen::Index j = data.text_cells.begin()->first.second;
    throw PipelineError(data.column_name(j),
                        "text cells present; resolve them before imputing");
  }
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  DataMatrix out = data;
  std::vector<double> rates(static_cast<std::size_t>(d), 0.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    double sum = 0.0;
    Eigen::Index observed = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!data.missing_mask(i, j)) {
        sum += data.values(i, j);
        ++observed;
      }
    }
    if (observed == 0) {
      throw PipelineError(data.column_name(j), "all values missing");
    }
    const double mean = sum / static_cast<double>(observed);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (data.missing_mask(i, j)) {
        out.values(i, j) = mean;
        out.missing_mask(i, j) = false;
      }
    }
    rates[static_cast<std::size_t>(j)] =
        static_cast<double>(n - observed) / static_cast<double>(n);
  }
  return {std::move(out), std::move(rates)};
}

// Per-column z-scores with the (n-1) standard deviation.
inline DataMatrix standardize(const DataMatrix& data) {
  require_complete(data, "standardize");
  const Eigen::Index n = data.rows();
  if (n < 2) {
    throw std::domain_error("standardize: need at least two rows");
  }
  DataMatrix out = data;
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const double mean = data.values.col(j).mean();
    const double ss = (data.values.col(j).array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) {
      throw PipelineError(data.column_name(j), "zero variance");
    }
    out.values.col(j) = (data.values.col(j).array() - mean) / sd;
  }
  return out;
}

// Pearson correlations with an exactly unit diagonal.
inline Eigen::MatrixXd correlation_matrix(const DataMatrix& data) {
  const DataMatrix z = standardize(data);
  const Eigen::Index n = data.rows();
  Eigen::MatrixXd corr =
      (z.values.transpose() * z.values) / static_cast<double>(n - 1);
  corr = ((corr + corr.transpose()) / 2.0).eval();
  corr = corr.cwiseMax(-1.0).cwiseMin(1.0).eval();
  corr.diagonal().setOnes();
  return corr;
}

// Mean row norm over random D-column subsets, for each D in d_list: the
// norm-growth curve measured on real (or synthetic) tabular data instead of
// ideal Gaussian draws. Percentile bands pool all rows across repetitions.
inline ExperimentReport subset_norm_experiment(
    const DataMatrix& data, const std::vector<Eigen::Index>& d_list,
    int n_reps, std::uint64_t seed) {
  require_complete(data, "subset_norm_experiment");
  if (d_list.empty()) {
    throw std::domain_error("subset_norm_experiment: empty D list");
  }
  if (n_reps < 1) {
    throw std::domain_error("subset_norm_experiment: n_reps must be >= 1");
  }
  const Eigen::Index n = data.rows();
  const Eigen::Index d_total = data.cols();
  for (Eigen::Index d : d_list) {
    if (d < 1 || d > d_total) {
      throw std::domain_error(
          "subset_norm_experiment: every D must be in [1, " +
          std::to_string(d_total) + "]");
    }
  }

  ExperimentReport report;
  report.name = "subset_norms";
  report.params = {{"d_list", std::vector<Eigen::Index>(d_list)},
                   {"n_reps", n_reps},
                   {"n_rows", n},
                   {"n_cols", d_total},
                   {"seed", seed}};

  std::vector<double> dims, means, p01s, p99s, sqrt_ds;
  bool monotone = true;
  double max_rel_gap_from_10 = 0.0;
  std::vector<double> pool;
  for (Eigen::Index d : d_list) {
    pool.clear();
    pool.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n_reps));
    double rep_average_sum = 0.0;
    const std::string stream_name = "subset_norm_d" + std::to_string(d);
    for (int rep = 0; rep < n_reps; ++rep) {
      RandomStream stream =
          substream(seed, stream_name, static_cast<std::uint64_t>(rep));
      const std::vector<std::size_t> cols = stream.sample_without_replacement(
          static_cast<std::size_t>(d), static_cast<std::size_t>(d_total));
      Eigen::VectorXd norms2 = Eigen::VectorXd::Zero(n);
      for (std::size_t j : cols) {
        norms2 += data.values.col(static_cast<Eigen::Index>(j))
                      .array()
                      .square()
                      .matrix();
      }
      const Eigen::VectorXd norms = norms2.array().sqrt();
      rep_average_sum += norms.mean();
      pool.insert(pool.end(), norms.data(), norms.data() + norms.size());
    }
    std::sort(pool.begin(), pool.end());
    const double mean_norm = rep_average_sum / n_reps;
    if (!means.empty() && mean_norm <= means.back()) monotone = false;
    const double root_d = std::sqrt(static_cast<double>(d));
    if (d >= 10) {
      max_rel_gap_from_10 = std::max(max_rel_gap_from_10,
                                     std::abs(mean_norm - root_d) / root_d);
    }
    dims.push_back(static_cast<double>(d));
    means.push_back(mean_norm);
    p01s.push_back(percentile_sorted(pool, 0.01));
    p99s.push_back(percentile_sorted(pool, 0.99));
    sqrt_ds.push_back(root_d);
  }

  Series s{"subset_norms", {}};
  s.add_column("dimension", std::move(dims));
  s.add_column("mean_norm", std::move(means));
  s.add_column("p01_norm", std::move(p01s));
  s.add_column("p99_norm", std::move(p99s));
  s.add_column("sqrt_d", std::move(sqrt_ds));
  report.series.push_back(std::move(s));
  report.summary["monotone_increasing"] = monotone;
  report.summary["max_relative_gap_to_sqrt_d_from_d10"] = max_rel_gap_from_10;
  return report;
}

// Synthetic Likert-style table: equicorrelated Gaussian draws discretized to
// `levels` equal-probability bins (values 0..levels-1), with missing cells
// injected at the requested rate. Stands in for survey data that cannot be
// redistributed.
inline DataMatrix synth_likert(Eigen::Index n, Eigen::Index d, int levels,
                               double correlation, double missing_rate,
                               std::uint64_t seed) {
  if (n < 1 || d < 1) {
    throw std::domain_error("synth_likert: n and D must be >= 1");
  }
  if (levels < 2) {
    throw std::domain_error("synth_likert: levels must be >= 2");
  }
  if (!(correlation >= 0.0 && correlation < 1.0)) {
    throw std::domain_error("synth_likert: correlation must be in [0,1)");
  }
  if (!(missing_rate >= 0.0 && missing_rate < 1.0)) {
    throw std::domain_error("synth_likert: missing_rate must be in [0,1)");
  }

  const boost::math::normal gauss;
  std::vector<double> thresholds;
  for (int k = 1; k < levels; ++k) {
    thresholds.push_back(boost::math::quantile(
        gauss, static_cast<double>(k) / static_cast<double>(levels)));
  }

  DataMatrix data;
  data.values.resize(n, d);
  data.missing_mask = BoolMask::Constant(n, d, false);
  for (Eigen::Index j = 0; j < d; ++j) {
    data.column_labels.push_back("item" + std::to_string(j + 1));
  }

  const double shared_weight = std::sqrt(correlation);
  const double own_weight = std::sqrt(1.0 - correlation);
  RandomStream values_stream = substream(seed, "synth_values");
  for (Eigen::Index i = 0; i < n; ++i) {
    const double shared = values_stream.normal();
    for (Eigen::Index j = 0; j < d; ++j) {
      const double z = own_weight * values_stream.normal() + shared_weight * shared;
      int bin = 0;
      for (double t : thresholds) {
        if (z >= t) ++bin;
      }
      data.values(i, j) = static_cast<double>(bin);
    }
  }

  RandomStream missing_stream = substream(seed, "synth_missing");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (missing_stream.uniform01() < missing_rate) {
        data.missing_mask(i, j) = true;
        data.values(i, j) = DataMatrix::missing_sentinel();
      }
    }
  }
  return data;
}

}  // namespace typicality
