#pragma once

#include <vector>

namespace viscom::ml {

// counts[t][p]: rows are true classes, columns predictions.
struct ConfusionMatrix {
  int n_classes = 0;
  std::vector<std::vector<long>> counts;

  explicit ConfusionMatrix(int k = 3) : n_classes(k), counts(k, std::vector<long>(k, 0)) {}
  static ConfusionMatrix from(const std::vector<int>& truth, const std::vector<int>& pred, int k);

  long total() const;
  long tp(int c) const;
  long fp(int c) const;
  long fn(int c) const;
  long tn(int c) const;
};

// Unweighted mean over classes of 2TP / (2TP + FP + FN), 0 for an empty denominator.
double macro_f1(const ConfusionMatrix& cm);
double micro_accuracy(const ConfusionMatrix& cm);

}  // namespace viscom::ml
