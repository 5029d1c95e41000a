#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "viscom/ml/classifiers.hpp"
#include "viscom/ml/dataset.hpp"

namespace viscom::ml {

// Columns `columns` contribute their top `gamma` features.
struct SelectionGroup {
  std::vector<std::size_t> columns;
  std::size_t gamma = 0;
};

struct SelectionPlan {
  enum class Mode { kNone, kGrid, kForced };
  Mode mode = Mode::kNone;
  std::vector<std::size_t> gammas;     // kGrid; values above d are dropped
  std::vector<SelectionGroup> groups;  // kForced

  // Gamma candidates for `d` features: {nullopt} unless mode is kGrid.
  std::vector<std::optional<std::size_t>> candidates(std::size_t d) const;
};

// Training-split statistics: column means (imputation), population sds
// (standardization; 1 for constant columns) and selected columns.
struct Preprocessor {
  std::vector<double> means;
  std::vector<double> sds;
  std::vector<std::size_t> selected;

  static Preprocessor fit(const Matrix& x, std::span<const double> kg,
                          const SelectionPlan& plan, std::optional<std::size_t> gamma);
  // Imputes, optionally standardizes, and keeps the selected columns in order.
  Matrix transform(const Matrix& x, bool standardize) const;
};

// Mean-imputed copy of `x` using `means`.
Matrix impute(const Matrix& x, const std::vector<double>& means);

struct FittedPipeline {
  Preprocessor prep;
  bool standardize = true;
  std::unique_ptr<Model> model;

  std::vector<int> predict(const Matrix& raw) const;
};

FittedPipeline fit_pipeline(const ClassifierInfo& info, const Params& params,
                            const SelectionPlan& plan, std::optional<std::size_t> gamma,
                            const Dataset& train, std::uint64_t seed);

struct GridChoice {
  Params params;
  std::optional<std::size_t> gamma;
  double score = 0.0;  // mean inner macro-F1
};

// Inner stratified k-fold over `train`; every fold runs impute ->
// standardize -> select -> fit on its inner-training rows only. Best mean
// macro-F1 wins, ties to the first combination (grid order, then gamma).
GridChoice grid_search(const ClassifierInfo& info, const Dataset& train,
                       const SelectionPlan& plan, std::size_t k_inner, std::uint64_t seed);

enum class BaselineKind { kMostFrequent, kStratified, kUniform };
std::string to_string(BaselineKind k);
std::vector<int> baseline_predict(BaselineKind kind, const std::vector<int>& train_y,
                                  std::size_t n_test, int n_classes, std::uint64_t seed);

struct PfiResult {
  std::string feature_name;
  double accuracy_ori = 0.0;
  double mean_delta = 0.0;
  double std_delta = 0.0;
  int selection_count = 0;
  int repeats = 0;
  std::vector<double> deltas;  // accuracy_ori - accuracy_permuted per repeat
};

// One result per column of `x` (already model-ready), in column order.
std::vector<PfiResult> permutation_importance(const Model& model, const Matrix& x,
                                              const std::vector<int>& y,
                                              const std::vector<std::string>& names,
                                              int repeats, std::uint64_t seed);

// PFI over the pipeline's selected features on a raw test split.
std::vector<PfiResult> permutation_importance(const FittedPipeline& pipeline,
                                              const Dataset& test, int repeats,
                                              std::uint64_t seed);

}  // namespace viscom::ml
