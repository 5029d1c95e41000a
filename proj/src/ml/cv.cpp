#include "viscom/ml/cv.hpp"

#include <algorithm>
#include <map>

#include "viscom/ml/rng.hpp"

namespace viscom::ml {

std::vector<Fold> stratified_kfold(const std::vector<int>& y, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > y.size()) {
    throw BadK("k must lie in [2, n]; got k=" + std::to_string(k) + ", n=" +
               std::to_string(y.size()));
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
  std::vector<std::size_t> order;
  order.reserve(y.size());
  for (auto& [cls, members] : by_class) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(cls)}));
    rng.shuffle(members);
    order.insert(order.end(), members.begin(), members.end());
  }
  std::vector<Fold> folds(k);
  for (std::size_t p = 0; p < order.size(); ++p) folds[p % k].push_back(order[p]);
  for (Fold& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<std::size_t> train_indices(const Fold& test, std::size_t n) {
  std::vector<std::size_t> out;
  out.reserve(n - test.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < test.size() && test[j] == i) {
      ++j;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace viscom::ml
