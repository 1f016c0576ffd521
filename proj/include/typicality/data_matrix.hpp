#pragma once

#include <Eigen/Dense>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace typicality {

using BoolMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// n x D observation matrix. Masked cells hold a NaN sentinel and must never
// enter arithmetic; text_cells carries raw non-numeric tokens that survive
// loading and await clean_likert.
struct DataMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> column_labels;  // empty, or one label per column
  BoolMask missing_mask;                   // same shape as values
  std::map<std::pair<Eigen::Index, Eigen::Index>, std::string> text_cells;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  bool is_missing(Eigen::Index i, Eigen::Index j) const { return missing_mask(i, j); }
  bool has_missing() const { return missing_mask.any(); }
  bool has_text() const { return !text_cells.empty(); }

  std::string column_name(Eigen::Index j) const {
    if (j >= 0 && static_cast<std::size_t>(j) < column_labels.size()) {
      return column_labels[static_cast<std::size_t>(j)];
    }
    return "col" + std::to_string(j);
  }

  static double missing_sentinel() { return std::numeric_limits<double>::quiet_NaN(); }

  static DataMatrix from_values(Eigen::MatrixXd v,
                                std::vector<std::string> labels = {}) {
    if (v.rows() < 1 || v.cols() < 1) {
      throw std::domain_error("DataMatrix requires at least one row and one column");
    }
    if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != v.cols()) {
      throw std::invalid_argument("DataMatrix: label count does not match column count");
    }
    DataMatrix d;
    d.missing_mask = BoolMask::Constant(v.rows(), v.cols(), false);
    d.values = std::move(v);
    d.column_labels = std::move(labels);
    return d;
  }
};

// Fitting, scoring and moment computations require fully numeric input:
// no masked cells (impute first) and no unmapped text (clean first).
inline void require_complete(const DataMatrix& data, const char* op) {
  if (data.has_text()) {
    const auto& [cell, token] = *data.text_cells.begin();
    throw std::domain_error(std::string(op) + ": unmapped text cell at row " +
                            std::to_string(cell.first) + ", column '" +
                            data.column_name(cell.second) + "' (token '" + token +
                            "'); run clean_likert first");
  }
  if (data.has_missing()) {
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      for (Eigen::Index j = 0; j < data.cols(); ++j) {
        if (data.is_missing(i, j)) {
          throw std::domain_error(std::string(op) + ": missing value at row " +
                                  std::to_string(i) + ", column '" +
                                  data.column_name(j) + "'; impute first");
        }
      }
    }
  }
}

}  // namespace typicality
