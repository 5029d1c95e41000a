#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace viscom::ml {

class BadK : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Fold = std::vector<std::size_t>;  // sorted test indices

// Shuffles each class with `seed`, lays the classes out one after another
// and deals position p to fold p mod k. Per-class fold counts differ by at
// most one and the folds partition [0, n).
std::vector<Fold> stratified_kfold(const std::vector<int>& y, std::size_t k, std::uint64_t seed);

// Complement of `test` in [0, n), sorted.
std::vector<std::size_t> train_indices(const Fold& test, std::size_t n);

}  // namespace viscom::ml
