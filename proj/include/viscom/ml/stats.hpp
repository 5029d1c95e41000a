#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "viscom/ml/dataset.hpp"

namespace viscom::ml {

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateSample : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double mean(std::span<const double> v);
// Sample standard deviation (n - 1); 0 for fewer than two values.
double sample_sd(std::span<const double> v);

// Pearson r in [-1, 1]; 0 when either series is constant.
double pearson(std::span<const double> x, std::span<const double> y);

// Indices of the `gamma` columns of `x` with the largest |pearson(col, kg)|,
// ties by column index, returned in rank order. `x` must hold no missing values.
std::vector<std::size_t> select_features(const Matrix& x, std::span<const double> kg,
                                         std::size_t gamma);

// One-sample, one-sided (mean > baseline) t-test; p = 1 - CDF_t(t, m - 1).
// Needs >= 2 values with nonzero variance (DegenerateSample otherwise).
struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};
TTestResult t_test_one_sided(std::span<const double> values, double baseline);

// CDF of Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

inline double bonferroni(double alpha, int n_settings) { return alpha / n_settings; }

}  // namespace viscom::ml
