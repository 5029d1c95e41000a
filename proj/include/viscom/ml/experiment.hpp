#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "viscom/ml/dataset.hpp"
#include "viscom/ml/pipeline.hpp"

namespace viscom::ml {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FeatureSetSpec {
  std::string name;
  std::vector<std::string> prefixes;  // registry prefixes, e.g. "viscom.html"
};

enum class ExperimentMode { kFull, kSubsets, kCombination };

struct ExperimentConfig {
  std::vector<FeatureSetSpec> feature_sets;
  ExperimentMode mode = ExperimentMode::kFull;
  std::size_t k_outer = 10;
  std::size_t k_inner = 3;
  // "grid" (gamma searched over `gammas`), "none", or a fixed gamma.
  std::string gamma_policy = "grid";
  std::optional<std::size_t> fixed_gamma;
  std::vector<std::size_t> gammas = {1, 5, 10, 15, 20};
  std::size_t combination_gamma = 10;
  int repeats = 100;
  double alpha = 0.05;
  int n_settings = 5;
  std::uint64_t seed = 42;
  std::vector<std::string> classifiers = default_classifiers();
  std::string importance_classifier = "knn";
  std::string importance_setting;  // empty: first setting

  double alpha_bon() const { return alpha / n_settings; }

  // Throws ConfigError on unknown keys, bad values or unknown classifiers.
  static ExperimentConfig from_json(const std::string& text);
  nlohmann::ordered_json to_json() const;
};

struct Setting {
  std::string name;
  std::string group;      // full | subset | combination
  std::string selection;  // grid | fixed | none | forced
  std::vector<std::size_t> columns;
  SelectionPlan plan;     // indexes into `columns`
};

// Resolves feature sets against the dataset columns; ConfigError when a set
// matches no column.
std::vector<Setting> build_settings(const ExperimentConfig& config,
                                    const std::vector<std::string>& feature_names);

struct Summary {
  double f1_mean = 0.0;
  double f1_std = 0.0;
  double acc_mean = 0.0;
  double acc_std = 0.0;
};

struct FoldResult {
  std::size_t fold = 0;
  double accuracy = 0.0;
  double f1 = 0.0;
  Params params;
  std::optional<std::size_t> gamma;
  std::vector<std::string> selected;
};

struct ClassifierResult {
  std::string name;
  std::vector<FoldResult> folds;
  Summary summary;
};

struct SettingResult {
  std::string name;
  std::string group;
  std::string selection;
  std::size_t n_features = 0;
  std::vector<ClassifierResult> classifiers;
  Summary aggregate;  // means and sample sds over the classifier means
  double t = 0.0;
  double p_value = 1.0;
  bool degenerate_sample = false;
  bool significant = false;
};

struct BaselineResult {
  std::string name;
  std::vector<double> fold_accuracy;
  std::vector<double> fold_f1;
  Summary summary;
};

struct ExperimentReport {
  std::uint64_t seed = 0;
  nlohmann::ordered_json config;
  std::size_t n_rows = 0;
  std::vector<std::size_t> class_counts;
  double alpha = 0.05;
  int n_settings = 5;
  double alpha_bon = 0.01;
  std::vector<BaselineResult> baselines;
  std::string best_baseline;
  double baseline_accuracy = 0.0;
  std::vector<SettingResult> settings;
};

// Outer stratified CV per setting and classifier with nested grid search;
// baselines on the same folds; one-sided t-test of the per-classifier mean
// accuracies against the best baseline accuracy, at alpha / n_settings.
// A zero-variance sample yields p = 0 when its mean beats the baseline and 1 otherwise.
ExperimentReport run_experiment(const Dataset& data, const ExperimentConfig& config,
                                std::size_t workers = 1);

// PFI of `config.importance_classifier` on one setting: per outer fold the
// grid-searched pipeline is refit and its selected features permuted on the
// test split. Deltas are pooled per feature over the folds selecting it.
// Sorted by mean_delta descending, then name.
std::vector<PfiResult> run_importance(const Dataset& data, const ExperimentConfig& config,
                                      std::size_t workers = 1);

nlohmann::ordered_json report_to_json(const ExperimentReport& r);
std::string report_json_text(const ExperimentReport& r);
// Table-shaped rows: group,setting,classifier,f1_mean,f1_std,acc_mean,acc_std,p_value,significant.
std::string report_to_csv(const ExperimentReport& r);
// Human-readable table from a report.json document.
std::string render_report(const nlohmann::json& report);

// feature,selection_count,mean_delta,std_delta,accuracy_ori,repeats
std::string pfi_to_csv(const std::vector<PfiResult>& rows);
std::vector<PfiResult> pfi_from_csv(const std::string& text);

// Fraction of outer folds (over all classifiers) of `setting` selecting `feature`.
double selection_rate(const SettingResult& setting, const std::string& feature);

}  // namespace viscom::ml
