#include "viscom/ml/dataset.hpp"

#include <map>
#include <stdexcept>

namespace viscom::ml {

Matrix Matrix::take_rows(const std::vector<std::size_t>& idx) const {
  Matrix m(idx.size(), cols);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    std::copy(row(idx[i]), row(idx[i]) + cols, m.data.begin() + static_cast<long>(i * cols));
  }
  return m;
}

Matrix Matrix::take_cols(const std::vector<std::size_t>& idx) const {
  Matrix m(rows, idx.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < idx.size(); ++j) m(r, j) = (*this)(r, idx[j]);
  }
  return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = (*this)(r, c);
  return out;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset d;
  d.feature_names = feature_names;
  d.n_classes = n_classes;
  d.x = x.take_rows(rows);
  for (std::size_t r : rows) {
    d.ids.push_back(ids[r]);
    d.y.push_back(y[r]);
    d.kg.push_back(kg[r]);
  }
  return d;
}

Dataset Dataset::select_columns(const std::vector<std::size_t>& cols) const {
  Dataset d = *this;
  d.x = x.take_cols(cols);
  d.feature_names.clear();
  for (std::size_t c : cols) d.feature_names.push_back(feature_names[c]);
  return d;
}

Dataset join_dataset(const FeatureTable& features, const std::vector<LabelRow>& labels) {
  std::map<std::string, const LabelRow*> by_user;
  for (const LabelRow& l : labels) {
    if (!by_user.emplace(l.user_id, &l).second) {
      throw std::invalid_argument("duplicate user in labels: " + l.user_id);
    }
  }
  Dataset d;
  d.feature_names = features.names;
  d.x = Matrix(features.rows.size(), features.names.size());
  std::map<std::string, bool> seen;
  for (std::size_t r = 0; r < features.rows.size(); ++r) {
    const std::string& user = features.keys[r].front();
    if (!seen.emplace(user, true).second) {
      throw std::invalid_argument("duplicate user in features: " + user);
    }
    auto it = by_user.find(user);
    if (it == by_user.end()) throw std::invalid_argument("no label for user " + user);
    d.ids.push_back(user);
    d.y.push_back(static_cast<int>(it->second->label.cls));
    d.kg.push_back(it->second->label.kg);
    for (std::size_t c = 0; c < features.names.size(); ++c) {
      const auto& v = features.rows[r][c];
      d.x(r, c) = v ? *v : kMissing;
    }
  }
  if (seen.size() != by_user.size()) {
    throw std::invalid_argument("labels.csv has users without feature rows");
  }
  return d;
}

}  // namespace viscom::ml
