#include "viscom/ml/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "viscom/ml/cv.hpp"
#include "viscom/ml/metrics.hpp"
#include "viscom/ml/rng.hpp"
#include "viscom/ml/stats.hpp"

namespace viscom::ml {

std::vector<std::optional<std::size_t>> SelectionPlan::candidates(std::size_t d) const {
  if (mode != Mode::kGrid) return {std::nullopt};
  std::vector<std::optional<std::size_t>> out;
  for (std::size_t g : gammas) {
    if (g >= 1 && g <= d) out.emplace_back(g);
  }
  if (out.empty()) out.emplace_back(d);
  return out;
}

Matrix impute(const Matrix& x, const std::vector<double>& means) {
  Matrix out = x;
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (std::size_t c = 0; c < out.cols; ++c) {
      if (is_missing(out(r, c))) out(r, c) = means[c];
    }
  }
  return out;
}

Preprocessor Preprocessor::fit(const Matrix& x, std::span<const double> kg,
                               const SelectionPlan& plan, std::optional<std::size_t> gamma) {
  Preprocessor p;
  p.means.assign(x.cols, 0.0);
  p.sds.assign(x.cols, 1.0);
  for (std::size_t c = 0; c < x.cols; ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < x.rows; ++r) {
      if (!is_missing(x(r, c))) {
        sum += x(r, c);
        ++n;
      }
    }
    p.means[c] = n > 0 ? sum / static_cast<double>(n) : 0.0;
  }
  const Matrix filled = impute(x, p.means);
  for (std::size_t c = 0; c < x.cols; ++c) {
    double ss = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
      const double d = filled(r, c) - p.means[c];
      ss += d * d;
    }
    const double sd = x.rows > 0 ? std::sqrt(ss / static_cast<double>(x.rows)) : 0.0;
    p.sds[c] = sd > 0.0 ? sd : 1.0;
  }

  switch (plan.mode) {
    case SelectionPlan::Mode::kNone:
      p.selected.resize(x.cols);
      std::iota(p.selected.begin(), p.selected.end(), 0);
      break;
    case SelectionPlan::Mode::kGrid:
      p.selected = select_features(filled, kg, gamma.value_or(x.cols));
      break;
    case SelectionPlan::Mode::kForced:
      for (const SelectionGroup& g : plan.groups) {
        const Matrix part = filled.take_cols(g.columns);
        for (std::size_t local : select_features(part, kg, g.gamma)) {
          const std::size_t c = g.columns[local];
          if (std::find(p.selected.begin(), p.selected.end(), c) == p.selected.end()) {
            p.selected.push_back(c);
          }
        }
      }
      break;
  }
  return p;
}

Matrix Preprocessor::transform(const Matrix& x, bool standardize) const {
  Matrix out(x.rows, selected.size());
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t j = 0; j < selected.size(); ++j) {
      const std::size_t c = selected[j];
      double v = x(r, c);
      if (is_missing(v)) v = means[c];
      if (standardize) v = (v - means[c]) / sds[c];
      out(r, j) = v;
    }
  }
  return out;
}

std::vector<int> FittedPipeline::predict(const Matrix& raw) const {
  return model->predict(prep.transform(raw, standardize));
}

FittedPipeline fit_pipeline(const ClassifierInfo& info, const Params& params,
                            const SelectionPlan& plan, std::optional<std::size_t> gamma,
                            const Dataset& train, std::uint64_t seed) {
  FittedPipeline fp;
  fp.prep = Preprocessor::fit(train.x, train.kg, plan, gamma);
  fp.standardize = info.standardize;
  const Matrix xt = fp.prep.transform(train.x, fp.standardize);
  fp.model = train_model(info, params, xt, train.y, train.n_classes, seed);
  return fp;
}

GridChoice grid_search(const ClassifierInfo& info, const Dataset& train,
                       const SelectionPlan& plan, std::size_t k_inner, std::uint64_t seed) {
  if (info.grid.empty()) throw std::invalid_argument("empty hyperparameter grid for " + info.name);
  const auto folds = stratified_kfold(train.y, k_inner, derive_seed(seed, {tag("inner")}));
  std::vector<Dataset> inner_train, inner_test;
  for (const Fold& f : folds) {
    inner_train.push_back(train.subset(train_indices(f, train.size())));
    inner_test.push_back(train.subset(f));
  }
  const auto gammas = plan.candidates(train.x.cols);

  GridChoice best;
  bool have = false;
  for (std::size_t g = 0; g < info.grid.size(); ++g) {
    for (const auto& gamma : gammas) {
      double total = 0.0;
      for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto fp = fit_pipeline(info, info.grid[g], plan, gamma, inner_train[f],
                                     derive_seed(seed, {tag("fit"), g, f}));
        const auto pred = fp.predict(inner_test[f].x);
        total += macro_f1(ConfusionMatrix::from(inner_test[f].y, pred, train.n_classes));
      }
      const double score = total / static_cast<double>(folds.size());
      if (!have || score > best.score) {
        best = {info.grid[g], gamma, score};
        have = true;
      }
    }
  }
  return best;
}

std::string to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::kMostFrequent:
      return "most_frequent";
    case BaselineKind::kStratified:
      return "stratified";
    case BaselineKind::kUniform:
      return "uniform";
  }
  return "most_frequent";
}

std::vector<int> baseline_predict(BaselineKind kind, const std::vector<int>& train_y,
                                  std::size_t n_test, int n_classes, std::uint64_t seed) {
  if (train_y.empty()) throw std::invalid_argument("baseline needs training labels");
  std::vector<std::size_t> counts(n_classes, 0);
  for (int c : train_y) ++counts[c];
  std::vector<int> out(n_test);
  Rng rng(seed);
  switch (kind) {
    case BaselineKind::kMostFrequent: {
      const int major = static_cast<int>(std::max_element(counts.begin(), counts.end()) -
                                         counts.begin());
      std::fill(out.begin(), out.end(), major);
      break;
    }
    case BaselineKind::kStratified:
      for (int& o : out) {
        std::size_t pick = rng.below(train_y.size());
        int c = 0;
        while (pick >= counts[c]) pick -= counts[c++];
        o = c;
      }
      break;
    case BaselineKind::kUniform:
      for (int& o : out) o = static_cast<int>(rng.below(static_cast<std::size_t>(n_classes)));
      break;
  }
  return out;
}

namespace {

double accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) ok += truth[i] == pred[i];
  return truth.empty() ? 0.0 : static_cast<double>(ok) / static_cast<double>(truth.size());
}

}  // namespace

std::vector<PfiResult> permutation_importance(const Model& model, const Matrix& x,
                                              const std::vector<int>& y,
                                              const std::vector<std::string>& names,
                                              int repeats, std::uint64_t seed) {
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (names.size() != x.cols) throw std::invalid_argument("one name per column required");
  const double ori = accuracy(y, model.predict(x));
  std::vector<PfiResult> out;
  Matrix work = x;
  for (std::size_t c = 0; c < x.cols; ++c) {
    PfiResult res;
    res.feature_name = names[c];
    res.accuracy_ori = ori;
    res.selection_count = 1;
    res.repeats = repeats;
    const std::vector<double> original = x.column(c);
    for (int r = 0; r < repeats; ++r) {
      std::vector<double> col = original;
      Rng rng(derive_seed(seed, {tag(names[c]), static_cast<std::uint64_t>(r)}));
      rng.shuffle(col);
      for (std::size_t i = 0; i < x.rows; ++i) work(i, c) = col[i];
      res.deltas.push_back(ori - accuracy(y, model.predict(work)));
    }
    for (std::size_t i = 0; i < x.rows; ++i) work(i, c) = original[i];
    res.mean_delta = mean(res.deltas);
    res.std_delta = sample_sd(res.deltas);
    out.push_back(std::move(res));
  }
  return out;
}

std::vector<PfiResult> permutation_importance(const FittedPipeline& pipeline,
                                              const Dataset& test, int repeats,
                                              std::uint64_t seed) {
  const Matrix xt = pipeline.prep.transform(test.x, pipeline.standardize);
  std::vector<std::string> names;
  for (std::size_t c : pipeline.prep.selected) names.push_back(test.feature_names[c]);
  return permutation_importance(*pipeline.model, xt, test.y, names, repeats, seed);
}

}  // namespace viscom::ml
