#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "viscom/ml/dataset.hpp"

namespace viscom::ml {

class DegenerateTraining : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Model {
 public:
  virtual ~Model() = default;
  virtual int predict_row(const double* row) const = 0;
  std::vector<int> predict(const Matrix& x) const;
};

using Params = nlohmann::json;

struct ClassifierSpec {
  std::string name;
  Params params = Params::object();
};

using Trainer = std::function<std::unique_ptr<Model>(
    const Params& params, const Matrix& x, const std::vector<int>& y, int n_classes,
    std::uint64_t seed)>;

// Plug-in contract: a trainer, its hyperparameter grid, and whether it
// consumes standardized inputs (trees take imputed raw values).
struct ClassifierInfo {
  std::string name;
  Trainer trainer;
  std::vector<Params> grid;
  bool standardize = true;
};

// Built-ins: knn, gnb, cart, rf, adaboost. Registering an existing name replaces it.
void register_classifier(ClassifierInfo info);
const ClassifierInfo& classifier_info(const std::string& name);  // std::out_of_range
std::vector<std::string> classifier_names();
const std::vector<std::string>& default_classifiers();

// Throws DegenerateTraining when a class in [0, n_classes) has no training row.
std::unique_ptr<Model> train(const ClassifierSpec& spec, const Matrix& x,
                             const std::vector<int>& y, int n_classes, std::uint64_t seed);
std::unique_ptr<Model> train_model(const ClassifierInfo& info, const Params& params,
                                   const Matrix& x, const std::vector<int>& y, int n_classes,
                                   std::uint64_t seed);

// Direct constructors, mainly for tests.
struct TreeParams {
  int max_depth = 0;  // 0 = unbounded
  int min_leaf = 1;
  std::size_t max_features = 0;  // 0 = all features at every split
};

std::unique_ptr<Model> fit_knn(const Matrix& x, const std::vector<int>& y, int n_classes, int k,
                               bool manhattan);
std::unique_ptr<Model> fit_gnb(const Matrix& x, const std::vector<int>& y, int n_classes,
                               double var_floor);
std::unique_ptr<Model> fit_tree(const Matrix& x, const std::vector<int>& y,
                                const std::vector<double>& weights, int n_classes,
                                const TreeParams& p, std::uint64_t seed);
std::unique_ptr<Model> fit_forest(const Matrix& x, const std::vector<int>& y, int n_classes,
                                  int n_trees, int max_depth, std::uint64_t seed);
std::unique_ptr<Model> fit_adaboost(const Matrix& x, const std::vector<int>& y, int n_classes,
                                    int rounds, std::uint64_t seed);

}  // namespace viscom::ml
