#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "viscom/session.hpp"

namespace viscom::ml {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

// Dense row-major matrix. Missing entries are NaN.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  Matrix take_rows(const std::vector<std::size_t>& idx) const;
  Matrix take_cols(const std::vector<std::size_t>& idx) const;
  std::vector<double> column(std::size_t c) const;
};

// Classification input: x (n x d), class indices y, numeric KG per row.
struct Dataset {
  std::vector<std::string> ids;
  std::vector<std::string> feature_names;
  Matrix x;
  std::vector<int> y;
  std::vector<double> kg;
  int n_classes = 3;

  std::size_t size() const { return y.size(); }
  Dataset subset(const std::vector<std::size_t>& rows) const;
  Dataset select_columns(const std::vector<std::size_t>& cols) const;
};

// Joins features.csv (keys user_id, scope) with labels.csv on user_id.
// Throws std::invalid_argument on unmatched users or duplicate ids.
Dataset join_dataset(const FeatureTable& features, const std::vector<LabelRow>& labels);

}  // namespace viscom::ml
