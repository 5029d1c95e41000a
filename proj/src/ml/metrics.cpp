#include "viscom/ml/metrics.hpp"

#include <stdexcept>

namespace viscom::ml {

ConfusionMatrix ConfusionMatrix::from(const std::vector<int>& truth, const std::vector<int>& pred,
                                      int k) {
  if (truth.size() != pred.size()) throw std::invalid_argument("label vectors differ in length");
  ConfusionMatrix cm(k);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= k || pred[i] < 0 || pred[i] >= k) {
      throw std::invalid_argument("class index out of range");
    }
    ++cm.counts[truth[i]][pred[i]];
  }
  return cm;
}

long ConfusionMatrix::total() const {
  long t = 0;
  for (const auto& row : counts) {
    for (long v : row) t += v;
  }
  return t;
}

long ConfusionMatrix::tp(int c) const { return counts[c][c]; }

long ConfusionMatrix::fp(int c) const {
  long s = 0;
  for (int t = 0; t < n_classes; ++t) {
    if (t != c) s += counts[t][c];
  }
  return s;
}

long ConfusionMatrix::fn(int c) const {
  long s = 0;
  for (int p = 0; p < n_classes; ++p) {
    if (p != c) s += counts[c][p];
  }
  return s;
}

long ConfusionMatrix::tn(int c) const { return total() - tp(c) - fp(c) - fn(c); }

double macro_f1(const ConfusionMatrix& cm) {
  if (cm.n_classes == 0) return 0.0;
  double sum = 0.0;
  for (int c = 0; c < cm.n_classes; ++c) {
    const double denom = 2.0 * cm.tp(c) + cm.fp(c) + cm.fn(c);
    sum += denom > 0.0 ? 2.0 * cm.tp(c) / denom : 0.0;
  }
  return sum / cm.n_classes;
}

double micro_accuracy(const ConfusionMatrix& cm) {
  const long t = cm.total();
  if (t == 0) return 0.0;
  long correct = 0;
  for (int c = 0; c < cm.n_classes; ++c) correct += cm.tp(c);
  return static_cast<double>(correct) / static_cast<double>(t);
}

}  // namespace viscom::ml
