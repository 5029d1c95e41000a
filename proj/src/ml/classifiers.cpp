#include "viscom/ml/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

#include "viscom/ml/rng.hpp"

namespace viscom::ml {

std::vector<int> Model::predict(const Matrix& x) const {
  std::vector<int> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out[r] = predict_row(x.row(r));
  return out;
}

namespace {

int argmax(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

class Knn : public Model {
 public:
  Knn(Matrix x, std::vector<int> y, int n_classes, int k, bool manhattan)
      : x_(std::move(x)), y_(std::move(y)), n_classes_(n_classes), k_(k), manhattan_(manhattan) {}

  int predict_row(const double* row) const override {
    std::vector<std::pair<double, std::size_t>> d(x_.rows);
    for (std::size_t r = 0; r < x_.rows; ++r) {
      const double* t = x_.row(r);
      double s = 0.0;
      for (std::size_t c = 0; c < x_.cols; ++c) {
        const double diff = row[c] - t[c];
        s += manhattan_ ? std::abs(diff) : diff * diff;
      }
      d[r] = {s, r};
    }
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_), d.size());
    std::partial_sort(d.begin(), d.begin() + static_cast<long>(k), d.end());
    std::vector<double> votes(n_classes_, 0.0);
    for (std::size_t i = 0; i < k; ++i) votes[y_[d[i].second]] += 1.0;
    return argmax(votes);
  }

 private:
  Matrix x_;
  std::vector<int> y_;
  int n_classes_;
  int k_;
  bool manhattan_;
};

class GaussianNb : public Model {
 public:
  GaussianNb(const Matrix& x, const std::vector<int>& y, int n_classes, double var_floor)
      : n_classes_(n_classes), d_(x.cols) {
    mean_.assign(n_classes * d_, 0.0);
    var_.assign(n_classes * d_, 0.0);
    std::vector<double> count(n_classes, 0.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
      count[y[r]] += 1.0;
      for (std::size_t c = 0; c < d_; ++c) mean_[y[r] * d_ + c] += x(r, c);
    }
    for (int k = 0; k < n_classes; ++k) {
      for (std::size_t c = 0; c < d_; ++c) mean_[k * d_ + c] /= count[k];
    }
    for (std::size_t r = 0; r < x.rows; ++r) {
      for (std::size_t c = 0; c < d_; ++c) {
        const double diff = x(r, c) - mean_[y[r] * d_ + c];
        var_[y[r] * d_ + c] += diff * diff;
      }
    }
    double max_var = 0.0;
    for (std::size_t c = 0; c < d_; ++c) {
      double m = 0.0;
      for (std::size_t r = 0; r < x.rows; ++r) m += x(r, c);
      m /= static_cast<double>(x.rows);
      double v = 0.0;
      for (std::size_t r = 0; r < x.rows; ++r) v += (x(r, c) - m) * (x(r, c) - m);
      max_var = std::max(max_var, v / static_cast<double>(x.rows));
    }
    const double epsilon = max_var > 0.0 ? var_floor * max_var : var_floor;
    for (int k = 0; k < n_classes; ++k) {
      for (std::size_t c = 0; c < d_; ++c) var_[k * d_ + c] = var_[k * d_ + c] / count[k] + epsilon;
    }
    log_prior_.resize(n_classes);
    for (int k = 0; k < n_classes; ++k) log_prior_[k] = std::log(count[k] / x.rows);
  }

  int predict_row(const double* row) const override {
    std::vector<double> score(n_classes_);
    for (int k = 0; k < n_classes_; ++k) {
      double s = log_prior_[k];
      for (std::size_t c = 0; c < d_; ++c) {
        const double v = var_[k * d_ + c];
        const double diff = row[c] - mean_[k * d_ + c];
        s -= 0.5 * std::log(2.0 * std::numbers::pi * v) + diff * diff / (2.0 * v);
      }
      score[k] = s;
    }
    return argmax(score);
  }

 private:
  int n_classes_;
  std::size_t d_;
  std::vector<double> mean_;
  std::vector<double> var_;
  std::vector<double> log_prior_;
};

class Tree : public Model {
 public:
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;
  };

  Tree(const Matrix& x, const std::vector<int>& y, const std::vector<double>& w, int n_classes,
       const TreeParams& p, std::uint64_t seed)
      : x_(x), y_(y), w_(w), n_classes_(n_classes), p_(p), rng_(seed) {
    std::vector<std::size_t> idx;
    for (std::size_t r = 0; r < x.rows; ++r) {
      if (w[r] > 0.0) idx.push_back(r);
    }
    build(idx, 0);
  }

  int predict_row(const double* row) const override {
    int n = 0;
    while (nodes_[n].feature >= 0) {
      n = row[nodes_[n].feature] <= nodes_[n].threshold ? nodes_[n].left : nodes_[n].right;
    }
    return nodes_[n].label;
  }

 private:
  static double impurity(const std::vector<double>& cw, double total) {
    if (total <= 0.0) return 0.0;
    double sq = 0.0;
    for (double v : cw) sq += v * v;
    return total - sq / total;
  }

  int build(std::vector<std::size_t>& idx, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    std::vector<double> cw(n_classes_, 0.0);
    double total = 0.0;
    for (std::size_t r : idx) {
      cw[y_[r]] += w_[r];
      total += w_[r];
    }
    nodes_[id].label = argmax(cw);
    const double parent = impurity(cw, total);
    const std::size_t n = idx.size();
    const std::size_t min_leaf = static_cast<std::size_t>(std::max(1, p_.min_leaf));
    if (parent <= 1e-12 * total || (p_.max_depth > 0 && depth >= p_.max_depth) ||
        n < 2 * min_leaf) {
      return id;
    }

    std::vector<std::size_t> features(x_.cols);
    std::iota(features.begin(), features.end(), 0);
    if (p_.max_features > 0 && p_.max_features < x_.cols) {
      for (std::size_t i = 0; i < p_.max_features; ++i) {
        std::swap(features[i], features[i + rng_.below(x_.cols - i)]);
      }
      features.resize(p_.max_features);
      std::sort(features.begin(), features.end());
    }

    double best = parent - 1e-12 * std::max(1.0, total);
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> sorted = idx;
    std::vector<double> left(n_classes_);
    for (std::size_t f : features) {
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        const double va = x_(a, f), vb = x_(b, f);
        return va < vb || (va == vb && a < b);
      });
      std::fill(left.begin(), left.end(), 0.0);
      double wl = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t r = sorted[i];
        left[y_[r]] += w_[r];
        wl += w_[r];
        const double v = x_(r, f);
        const double next = x_(sorted[i + 1], f);
        if (!(v < next)) continue;
        if (i + 1 < min_leaf || n - (i + 1) < min_leaf) continue;
        double sq_l = 0.0, sq_r = 0.0;
        for (int k = 0; k < n_classes_; ++k) {
          sq_l += left[k] * left[k];
          const double rk = cw[k] - left[k];
          sq_r += rk * rk;
        }
        const double wr = total - wl;
        const double score = (wl > 0.0 ? wl - sq_l / wl : 0.0) + (wr > 0.0 ? wr - sq_r / wr : 0.0);
        if (score < best) {
          best = score;
          best_feature = static_cast<int>(f);
          best_threshold = v + (next - v) / 2.0;
          if (!(best_threshold < next)) best_threshold = v;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> li, ri;
    for (std::size_t r : idx) {
      (x_(r, best_feature) <= best_threshold ? li : ri).push_back(r);
    }
    std::vector<std::size_t>().swap(sorted);
    nodes_[id].feature = best_feature;
    nodes_[id].threshold = best_threshold;
    const int l = build(li, depth + 1);
    nodes_[id].left = l;
    const int rr = build(ri, depth + 1);
    nodes_[id].right = rr;
    return id;
  }

  // Training data, referenced only while the constructor builds the tree.
  const Matrix& x_;
  const std::vector<int>& y_;
  const std::vector<double>& w_;
  int n_classes_;
  TreeParams p_;
  Rng rng_;
  std::vector<Node> nodes_;
};

class Forest : public Model {
 public:
  Forest(const Matrix& x, const std::vector<int>& y, int n_classes, int n_trees, int max_depth,
         std::uint64_t seed)
      : n_classes_(n_classes) {
    TreeParams p;
    p.max_depth = max_depth;
    p.min_leaf = 1;
    p.max_features = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(x.cols)))));
    std::vector<double> w(x.rows);
    for (int t = 0; t < n_trees; ++t) {
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(t), 0}));
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t i = 0; i < x.rows; ++i) w[rng.below(x.rows)] += 1.0;
      trees_.push_back(std::make_unique<Tree>(
          x, y, w, n_classes, p, derive_seed(seed, {static_cast<std::uint64_t>(t), 1})));
    }
  }

  int predict_row(const double* row) const override {
    std::vector<double> votes(n_classes_, 0.0);
    for (const auto& t : trees_) votes[t->predict_row(row)] += 1.0;
    return argmax(votes);
  }

 private:
  int n_classes_;
  std::vector<std::unique_ptr<Tree>> trees_;
};

class AdaBoost : public Model {
 public:
  AdaBoost(const Matrix& x, const std::vector<int>& y, int n_classes, int rounds,
           std::uint64_t seed)
      : n_classes_(n_classes) {
    const double n = static_cast<double>(x.rows);
    std::vector<double> w(x.rows, 1.0 / n);
    TreeParams stump;
    stump.max_depth = 1;
    for (int m = 0; m < rounds; ++m) {
      auto tree = std::make_unique<Tree>(x, y, w, n_classes, stump,
                                              derive_seed(seed, {static_cast<std::uint64_t>(m)}));
      double err = 0.0, total = 0.0;
      std::vector<bool> miss(x.rows);
      for (std::size_t r = 0; r < x.rows; ++r) {
        miss[r] = tree->predict_row(x.row(r)) != y[r];
        if (miss[r]) err += w[r];
        total += w[r];
      }
      err /= total;
      if (err <= 1e-12) {
        alphas_.push_back(1.0);
        stumps_.push_back(std::move(tree));
        break;
      }
      if (err >= 1.0 - 1.0 / n_classes) {
        if (stumps_.empty()) {
          alphas_.push_back(1.0);
          stumps_.push_back(std::move(tree));
        }
        break;
      }
      const double alpha = std::log((1.0 - err) / err) + std::log(n_classes - 1.0);
      double sum = 0.0;
      for (std::size_t r = 0; r < x.rows; ++r) {
        if (miss[r]) w[r] *= std::exp(alpha);
        sum += w[r];
      }
      for (double& v : w) v /= sum;
      alphas_.push_back(alpha);
      stumps_.push_back(std::move(tree));
    }
  }

  int predict_row(const double* row) const override {
    std::vector<double> score(n_classes_, 0.0);
    for (std::size_t i = 0; i < stumps_.size(); ++i) score[stumps_[i]->predict_row(row)] += alphas_[i];
    return argmax(score);
  }

 private:
  int n_classes_;
  std::vector<double> alphas_;
  std::vector<std::unique_ptr<Tree>> stumps_;
};

std::vector<Params> product(const std::string& a, const std::vector<Params>& av,
                            const std::string& b, const std::vector<Params>& bv) {
  std::vector<Params> out;
  for (const auto& x : av) {
    for (const auto& y : bv) {
      Params p = Params::object();
      p[a] = x;
      p[b] = y;
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Params> single(const std::string& a, const std::vector<Params>& av) {
  std::vector<Params> out;
  for (const auto& x : av) {
    Params p = Params::object();
    p[a] = x;
    out.push_back(p);
  }
  return out;
}

struct Registry {
  std::mutex mutex;
  std::map<std::string, ClassifierInfo> entries;

  Registry() {
    add({"knn",
         [](const Params& p, const Matrix& x, const std::vector<int>& y, int k, std::uint64_t) {
           return fit_knn(x, y, k, p.at("k").get<int>(), p.at("metric").get<std::string>() == "manhattan");
         },
         product("k", {1, 3, 5, 7, 11}, "metric", {"euclidean", "manhattan"}), true});
    add({"gnb",
         [](const Params& p, const Matrix& x, const std::vector<int>& y, int k, std::uint64_t) {
           return fit_gnb(x, y, k, p.at("var_floor").get<double>());
         },
         single("var_floor", {1e-9, 1e-6, 1e-3}), true});
    add({"cart",
         [](const Params& p, const Matrix& x, const std::vector<int>& y, int k, std::uint64_t s) {
           TreeParams tp;
           tp.max_depth = p.at("max_depth").get<int>();
           tp.min_leaf = p.at("min_leaf").get<int>();
           return fit_tree(x, y, std::vector<double>(x.rows, 1.0), k, tp, s);
         },
         product("max_depth", {2, 3, 5, 0}, "min_leaf", {1, 3, 5}), false});
    add({"rf",
         [](const Params& p, const Matrix& x, const std::vector<int>& y, int k, std::uint64_t s) {
           return fit_forest(x, y, k, p.at("trees").get<int>(), p.at("max_depth").get<int>(), s);
         },
         product("trees", {50, 200}, "max_depth", {3, 0}), false});
    add({"adaboost",
         [](const Params& p, const Matrix& x, const std::vector<int>& y, int k, std::uint64_t s) {
           return fit_adaboost(x, y, k, p.at("rounds").get<int>(), s);
         },
         single("rounds", {50, 200}), true});
  }

  void add(ClassifierInfo info) { entries[info.name] = std::move(info); }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_classifier(ClassifierInfo info) {
  std::lock_guard lock(registry().mutex);
  registry().add(std::move(info));
}

const ClassifierInfo& classifier_info(const std::string& name) {
  std::lock_guard lock(registry().mutex);
  auto it = registry().entries.find(name);
  if (it == registry().entries.end()) throw std::out_of_range("unknown classifier: " + name);
  return it->second;
}

std::vector<std::string> classifier_names() {
  std::lock_guard lock(registry().mutex);
  std::vector<std::string> out;
  for (const auto& [name, info] : registry().entries) out.push_back(name);
  return out;
}

const std::vector<std::string>& default_classifiers() {
  static const std::vector<std::string> names = {"knn", "gnb", "cart", "rf", "adaboost"};
  return names;
}

std::unique_ptr<Model> train_model(const ClassifierInfo& info, const Params& params,
                                   const Matrix& x, const std::vector<int>& y, int n_classes,
                                   std::uint64_t seed) {
  if (x.rows != y.size() || x.rows == 0) throw std::invalid_argument("empty or ragged training set");
  std::vector<bool> present(n_classes, false);
  for (int c : y) {
    if (c < 0 || c >= n_classes) throw std::invalid_argument("class index out of range");
    present[c] = true;
  }
  for (int c = 0; c < n_classes; ++c) {
    if (!present[c]) {
      throw DegenerateTraining("class " + std::to_string(c) + " absent from training split");
    }
  }
  return info.trainer(params, x, y, n_classes, seed);
}

std::unique_ptr<Model> train(const ClassifierSpec& spec, const Matrix& x,
                             const std::vector<int>& y, int n_classes, std::uint64_t seed) {
  return train_model(classifier_info(spec.name), spec.params, x, y, n_classes, seed);
}

std::unique_ptr<Model> fit_knn(const Matrix& x, const std::vector<int>& y, int n_classes, int k,
                               bool manhattan) {
  return std::make_unique<Knn>(x, y, n_classes, k, manhattan);
}

std::unique_ptr<Model> fit_gnb(const Matrix& x, const std::vector<int>& y, int n_classes,
                               double var_floor) {
  return std::make_unique<GaussianNb>(x, y, n_classes, var_floor);
}

std::unique_ptr<Model> fit_tree(const Matrix& x, const std::vector<int>& y,
                                const std::vector<double>& weights, int n_classes,
                                const TreeParams& p, std::uint64_t seed) {
  return std::make_unique<Tree>(x, y, weights, n_classes, p, seed);
}

std::unique_ptr<Model> fit_forest(const Matrix& x, const std::vector<int>& y, int n_classes,
                                  int n_trees, int max_depth, std::uint64_t seed) {
  return std::make_unique<Forest>(x, y, n_classes, n_trees, max_depth, seed);
}

std::unique_ptr<Model> fit_adaboost(const Matrix& x, const std::vector<int>& y, int n_classes,
                                    int rounds, std::uint64_t seed) {
  return std::make_unique<AdaBoost>(x, y, n_classes, rounds, seed);
}

}  // namespace viscom::ml
