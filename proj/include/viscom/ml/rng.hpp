#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace viscom::ml {

std::uint64_t splitmix64(std::uint64_t x);

// Child seed of `master` for a tag path; pure function of its inputs.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);
std::uint64_t tag(std::string_view name);  // FNV-1a of the name

// mt19937_64 with distribution code of our own so streams are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();                   // [0, 1)
  std::size_t below(std::size_t n);   // [0, n), unbiased
  double normal(double mean = 0.0, double sd = 1.0);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace viscom::ml
