#include "viscom/ml/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numeric>

namespace viscom::ml {

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw LengthMismatch("pearson: series lengths differ");
  if (x.size() < 2) throw LengthMismatch("pearson: need at least two values");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<std::size_t> select_features(const Matrix& x, std::span<const double> kg,
                                         std::size_t gamma) {
  std::vector<double> score(x.cols);
  for (std::size_t c = 0; c < x.cols; ++c) {
    const auto col = x.column(c);
    score[c] = std::abs(pearson(col, kg));
  }
  std::vector<std::size_t> idx(x.cols);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  idx.resize(std::min(gamma, idx.size()));
  return idx;
}

double student_t_cdf(double t, double df) {
  const double x = df / (df + t * t);
  const double tail = 0.5 * boost::math::ibeta(df / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

TTestResult t_test_one_sided(std::span<const double> values, double baseline) {
  if (values.size() < 2) throw DegenerateSample("t-test needs at least two values");
  const double sd = sample_sd(values);
  if (!(sd > 0.0)) throw DegenerateSample("t-test sample has zero variance");
  TTestResult r;
  r.df = static_cast<double>(values.size() - 1);
  r.t = (mean(values) - baseline) / (sd / std::sqrt(static_cast<double>(values.size())));
  const double x = r.df / (r.df + r.t * r.t);
  const double tail = 0.5 * boost::math::ibeta(r.df / 2.0, 0.5, x);
  r.p_value = r.t >= 0.0 ? tail : 1.0 - tail;
  return r;
}

}  // namespace viscom::ml
