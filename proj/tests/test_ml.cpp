#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "viscom/ml/classifiers.hpp"
#include "viscom/ml/cv.hpp"
#include "viscom/ml/dataset.hpp"
#include "viscom/ml/experiment.hpp"
#include "viscom/ml/metrics.hpp"
#include "viscom/ml/parallel.hpp"
#include "viscom/ml/pipeline.hpp"
#include "viscom/ml/rng.hpp"
#include "viscom/ml/stats.hpp"
#include "viscom/synth.hpp"

using namespace viscom;
using namespace viscom::ml;

namespace {

// Upper tail of Student's t by composite Simpson integration of the density.
double t_upper_tail_oracle(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) /
                   std::sqrt(df * M_PI);
  auto pdf = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
  const int n = 20000;
  const double h = t / n;
  double s = pdf(0) + pdf(t);
  for (int i = 1; i < n; ++i) s += pdf(i * h) * (i % 2 ? 4 : 2);
  return 0.5 - s * h / 3;
}

// Two Gaussian blobs per class along the first column.
Dataset blobs(std::size_t per_class, std::uint64_t seed, std::size_t noise_cols = 1) {
  Rng rng(seed);
  Dataset d;
  d.x = Matrix(3 * per_class, 1 + noise_cols);
  for (std::size_t i = 0; i < 3 * per_class; ++i) {
    const int c = static_cast<int>(i % 3);
    d.x(i, 0) = 4.0 * c + rng.normal(0, 0.5);
    for (std::size_t j = 1; j <= noise_cols; ++j) d.x(i, j) = rng.normal();
    d.y.push_back(c);
    d.kg.push_back(c + rng.normal(0, 0.1));
    d.ids.push_back("r" + std::to_string(i));
  }
  d.feature_names.push_back("signal");
  for (std::size_t j = 1; j <= noise_cols; ++j) d.feature_names.push_back("noise" + std::to_string(j));
  return d;
}

double accuracy_of(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ok += a[i] == b[i];
  return double(ok) / a.size();
}

Dataset synth_dataset(const SynthOptions& o) {
  const auto d = generate_synthetic(o);
  return join_dataset(d.features, d.labels);
}

}  // namespace

TEST_SUITE("ml") {
  TEST_CASE("seeds") {
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(tag("outer") != tag("inner"));
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    Rng r(1);
    std::vector<int> hist(5, 0);
    for (int i = 0; i < 50000; ++i) ++hist[r.below(5)];
    for (int h : hist) CHECK(std::abs(h - 10000) < 400);
  }

  TEST_CASE("metrics match a brute-force recount") {
    std::mt19937 gen(11);
    for (int trial = 0; trial < 1000; ++trial) {
      const int k = 2 + trial % 3;
      const std::size_t n = 1 + gen() % 40;
      std::vector<int> t(n), p(n);
      for (std::size_t i = 0; i < n; ++i) {
        t[i] = gen() % k;
        p[i] = gen() % k;
      }
      const auto cm = ConfusionMatrix::from(t, p, k);
      double f1 = 0;
      for (int c = 0; c < k; ++c) {
        double tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < n; ++i) {
          tp += t[i] == c && p[i] == c;
          fp += t[i] != c && p[i] == c;
          fn += t[i] == c && p[i] != c;
        }
        f1 += tp + fp + fn > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
      }
      CHECK(macro_f1(cm) == doctest::Approx(f1 / k).epsilon(1e-12));
      CHECK(micro_accuracy(cm) == doctest::Approx(accuracy_of(t, p)).epsilon(1e-12));
      CHECK(cm.total() == long(n));
    }
  }

  TEST_CASE("t distribution against numeric integration") {
    for (int df = 2; df <= 30; ++df) {
      for (double t : {0.1, 0.7, 1.5, 2.5, 4.0}) {
        CHECK(1.0 - student_t_cdf(t, df) == doctest::Approx(t_upper_tail_oracle(t, df)).epsilon(1e-9));
        CHECK(student_t_cdf(-t, df) == doctest::Approx(1.0 - student_t_cdf(t, df)));
      }
    }
    const std::vector<double> v{0.5, 0.6, 0.55, 0.7, 0.65};
    const auto r = t_test_one_sided(v, 0.4);
    CHECK(r.df == 4);
    CHECK(r.t == doctest::Approx((0.6 - 0.4) / (sample_sd(v) / std::sqrt(5.0))));
    CHECK(r.p_value == doctest::Approx(t_upper_tail_oracle(r.t, 4)).epsilon(1e-9));
    const std::vector<double> flat{0.5, 0.5};
    CHECK_THROWS_AS(t_test_one_sided(flat, 0.4), DegenerateSample);
  }

  TEST_CASE("bonferroni") {
    CHECK(bonferroni(0.05, 5) == 0.01);
    CHECK(bonferroni(0.05, 8) == 0.00625);
  }

  TEST_CASE("pearson and selection") {
    const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, z{4, 3, 2, 1}, c{1, 1, 1, 1};
    CHECK(pearson(x, y) == doctest::Approx(1.0));
    CHECK(pearson(x, z) == doctest::Approx(-1.0));
    CHECK(pearson(x, c) == 0.0);
    const std::vector<double> short_v{1, 2};
    CHECK_THROWS_AS(pearson(x, short_v), LengthMismatch);
    Matrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      m(i, 0) = c[i];
      m(i, 1) = z[i];
      m(i, 2) = x[i];
      m(i, 3) = double(i % 2);
    }
    CHECK(select_features(m, y, 2) == std::vector<std::size_t>{1, 2});
    CHECK(select_features(m, y, 4).back() == 0);
  }

  TEST_CASE("stratified folds partition the rows") {
    std::vector<int> y;
    for (int i = 0; i < 43; ++i) y.push_back(0);
    for (int i = 0; i < 41; ++i) y.push_back(1);
    for (int i = 0; i < 28; ++i) y.push_back(2);
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
      const auto folds = stratified_kfold(y, 10, seed);
      REQUIRE(folds.size() == 10);
      std::vector<int> seen(y.size(), 0);
      for (int cls = 0; cls < 3; ++cls) {
        std::vector<int> per;
        for (const auto& f : folds) {
          CHECK(std::is_sorted(f.begin(), f.end()));
          per.push_back(int(std::count_if(f.begin(), f.end(), [&](std::size_t i) { return y[i] == cls; })));
        }
        CHECK(*std::max_element(per.begin(), per.end()) - *std::min_element(per.begin(), per.end()) <= 1);
      }
      for (const auto& f : folds)
        for (auto i : f) ++seen[i];
      CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
      CHECK(stratified_kfold(y, 10, seed) == folds);
      const auto train = train_indices(folds[0], y.size());
      CHECK(train.size() + folds[0].size() == y.size());
    }
    CHECK(stratified_kfold(y, 10, 1) != stratified_kfold(y, 10, 2));
    CHECK_THROWS_AS(stratified_kfold(y, 1, 1), BadK);
    CHECK_THROWS_AS(stratified_kfold(y, 113, 1), BadK);
  }

  TEST_CASE("classifiers separate easy blobs") {
    const auto train = blobs(30, 1), test = blobs(30, 2);
    for (const auto& name : default_classifiers()) {
      const auto& info = classifier_info(name);
      const auto model = train_model(info, info.grid.front(), train.x, train.y, 3, 5);
      CAPTURE(name);
      CHECK(accuracy_of(model->predict(test.x), test.y) >= 0.9);
    }
    std::vector<int> two_classes(train.y.size(), 0);
    two_classes[0] = 1;
    CHECK_THROWS_AS(ml::train({"knn", {}}, train.x, two_classes, 3, 1), DegenerateTraining);
    CHECK_THROWS_AS(classifier_info("svm"), std::out_of_range);
  }

  TEST_CASE("knn and tree details") {
    Matrix x(4, 1);
    x(0, 0) = 0;
    x(1, 0) = 1;
    x(2, 0) = 10;
    x(3, 0) = 11;
    const std::vector<int> y{0, 0, 1, 1};
    auto knn = fit_knn(x, y, 2, 1, false);
    const double q[] = {9.0};
    CHECK(knn->predict_row(q) == 1);
    auto tree = fit_tree(x, y, std::vector<double>(4, 1.0), 2, TreeParams{}, 1);
    const double mid[] = {5.6};
    CHECK(tree->predict_row(mid) == 1);
    const double low[] = {5.4};
    CHECK(tree->predict_row(low) == 0);
    auto stump = fit_tree(x, y, {1, 1, 1, 1}, 2, TreeParams{1, 3, 0}, 1);
    CHECK(stump->predict_row(q) == stump->predict_row(low));
  }

  TEST_CASE("models are reproducible from their seed") {
    const auto d = blobs(20, 3, 4);
    for (const auto& name : {"rf", "adaboost", "cart"}) {
      const auto& info = classifier_info(name);
      const auto a = train_model(info, info.grid.back(), d.x, d.y, 3, 17)->predict(d.x);
      const auto b = train_model(info, info.grid.back(), d.x, d.y, 3, 17)->predict(d.x);
      CHECK(a == b);
    }
  }

  TEST_CASE("registry accepts plug-ins") {
    struct Constant : Model {
      int predict_row(const double*) const override { return 2; }
    };
    register_classifier({"always2",
                         [](const Params&, const Matrix&, const std::vector<int>&, int, std::uint64_t) {
                           return std::unique_ptr<Model>(new Constant);
                         },
                         {Params::object()},
                         false});
    const auto d = blobs(5, 1);
    const auto m = train({"always2", {}}, d.x, d.y, 3, 0);
    CHECK(m->predict(d.x) == std::vector<int>(15, 2));
    const auto names = classifier_names();
    CHECK(std::find(names.begin(), names.end(), "always2") != names.end());
  }

  TEST_CASE("preprocessing fits on training rows only") {
    Matrix x(4, 2);
    x(0, 0) = 1;
    x(1, 0) = 3;
    x(2, 0) = kMissing;
    x(3, 0) = 5;
    for (int i = 0; i < 4; ++i) x(i, 1) = 7;
    const std::vector<double> kg{0, 1, 2, 3};
    const auto prep = Preprocessor::fit(x, kg, SelectionPlan{}, std::nullopt);
    CHECK(prep.means[0] == 3.0);
    CHECK(prep.sds[1] == 1.0);
    const auto t = prep.transform(x, true);
    CHECK(t(2, 0) == 0.0);
    CHECK(t(0, 1) == 0.0);
    SelectionPlan plan;
    plan.mode = SelectionPlan::Mode::kGrid;
    plan.gammas = {1, 5};
    CHECK(plan.candidates(2) == std::vector<std::optional<std::size_t>>{1});
    plan.gammas = {5};
    CHECK(plan.candidates(2) == std::vector<std::optional<std::size_t>>{2});
  }

  TEST_CASE("grid search is deterministic and selects the signal") {
    const auto d = blobs(20, 4, 5);
    SelectionPlan plan;
    plan.mode = SelectionPlan::Mode::kGrid;
    plan.gammas = {1, 5};
    const auto a = grid_search(classifier_info("knn"), d, plan, 3, 9);
    const auto b = grid_search(classifier_info("knn"), d, plan, 3, 9);
    CHECK(a.params == b.params);
    CHECK(a.gamma == b.gamma);
    CHECK(a.score == b.score);
    const auto fitted = fit_pipeline(classifier_info("knn"), a.params, plan, 1, d, 3);
    CHECK(fitted.prep.selected == std::vector<std::size_t>{0});
  }

  TEST_CASE("baselines") {
    std::vector<int> y;
    for (int i = 0; i < 43; ++i) y.push_back(0);
    for (int i = 0; i < 41; ++i) y.push_back(1);
    for (int i = 0; i < 28; ++i) y.push_back(2);
    const auto mf = baseline_predict(BaselineKind::kMostFrequent, y, y.size(), 3, 0);
    const auto cm = ConfusionMatrix::from(y, mf, 3);
    CHECK(micro_accuracy(cm) == doctest::Approx(43.0 / 112.0));
    CHECK(macro_f1(cm) == doctest::Approx(86.0 / 155.0 / 3.0));
    const std::vector<int> tie{1, 1, 0, 0};
    CHECK(baseline_predict(BaselineKind::kMostFrequent, tie, 2, 3, 0) == std::vector<int>{0, 0});
    const auto u = baseline_predict(BaselineKind::kUniform, y, 3000, 3, 5);
    CHECK(std::count(u.begin(), u.end(), 2) > 900);
  }

  TEST_CASE("permutation importance") {
    Matrix x(60, 2);
    std::vector<int> y;
    for (std::size_t i = 0; i < 60; ++i) {
      x(i, 0) = double(i % 2);
      x(i, 1) = 3.0;
      y.push_back(int(i % 2));
    }
    auto model = fit_tree(x, y, std::vector<double>(60, 1.0), 2, TreeParams{}, 1);
    const auto r = permutation_importance(*model, x, y, {"signal", "flat"}, 100, 4);
    CHECK(r[0].accuracy_ori == 1.0);
    CHECK(r[0].mean_delta > 0.3);
    CHECK(r[1].mean_delta == 0.0);
    CHECK(r[1].std_delta == 0.0);
    CHECK(r[0].repeats == 100);
    CHECK(r[0].deltas.size() == 100);
    CHECK(permutation_importance(*model, x, y, {"signal", "flat"}, 100, 4)[0].deltas == r[0].deltas);
  }

  TEST_CASE("pfi mean concentrates with more repeats") {
    Matrix x(60, 1);
    std::vector<int> y;
    for (std::size_t i = 0; i < 60; ++i) {
      x(i, 0) = double(i % 2);
      y.push_back(int(i % 2));
    }
    auto model = fit_knn(x, y, 2, 1, false);
    auto spread = [&](int repeats) {
      std::vector<double> means;
      for (std::uint64_t s = 0; s < 40; ++s) {
        means.push_back(permutation_importance(*model, x, y, {"a"}, repeats, s)[0].mean_delta);
      }
      return sample_sd(means);
    };
    const double s10 = spread(10), s1000 = spread(1000);
    CHECK(s1000 < s10 / 5.0);
  }

  TEST_CASE("parallel_for reports the lowest failing index") {
    std::vector<int> out(50, 0);
    parallel_for(50, 4, [&](std::size_t i) { out[i] = int(i); });
    CHECK(std::accumulate(out.begin(), out.end(), 0) == 1225);
    try {
      parallel_for(50, 4, [](std::size_t i) {
        if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
      });
      FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "7");
    }
  }
}

TEST_SUITE("experiment") {
  TEST_CASE("config validation") {
    CHECK_THROWS_AS(ExperimentConfig::from_json("{}"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"feature_sets":["a"],"bogus":1})"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"feature_sets":["a"],"mode":"x"})"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"feature_sets":["a"],"classifiers":["svm"]})"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"feature_sets":["a"],"k_outer":1})"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json("not json"), ConfigError);
    const auto c = ExperimentConfig::from_json(R"({"feature_sets":["viscom"],"gamma_policy":3,"n_settings":8})");
    CHECK(c.fixed_gamma == 3u);
    CHECK(c.alpha_bon() == 0.00625);
    CHECK(ExperimentConfig::from_json(c.to_json().dump()).to_json() == c.to_json());
  }

  TEST_CASE("settings per mode") {
    const std::vector<std::string> names{"viscom.html.a", "viscom.html.b", "viscom.visual.c", "webrel.fact_01"};
    auto c = ExperimentConfig::from_json(
        R"({"feature_sets":["viscom.html","viscom.visual"],"mode":"subsets"})");
    auto s = build_settings(c, names);
    REQUIRE(s.size() == 4);
    CHECK(s[0].name == "viscom.html [fs]");
    CHECK(s[1].name == "viscom.html [no-fs]");
    CHECK(s[1].plan.mode == SelectionPlan::Mode::kNone);
    c = ExperimentConfig::from_json(R"({"feature_sets":["viscom","webrel"],"mode":"combination"})");
    s = build_settings(c, names);
    REQUIRE(s.size() == 1);
    CHECK(s[0].name == "viscom+webrel");
    CHECK(s[0].plan.mode == SelectionPlan::Mode::kForced);
    CHECK(s[0].plan.groups[0].gamma == 3);
    CHECK(s[0].plan.groups[1].gamma == 1);
    c = ExperimentConfig::from_json(R"({"feature_sets":["texcom"]})");
    CHECK_THROWS_AS(build_settings(c, names), ConfigError);
  }

  TEST_CASE("report is independent of the worker count") {
    SynthOptions o;
    o.n_sessions = 60;
    o.n_noise = 3;
    const auto d = synth_dataset(o);
    auto c = ExperimentConfig::from_json(
        R"({"feature_sets":["synth"],"k_outer":4,"k_inner":2,"gammas":[1,2],"classifiers":["knn","cart","gnb"],"seed":3})");
    const auto one = report_json_text(run_experiment(d, c, 1));
    const auto three = report_json_text(run_experiment(d, c, 3));
    CHECK(one == three);
    c.seed = 4;
    CHECK(report_json_text(run_experiment(d, c, 1)) != one);
  }

  TEST_CASE("report outputs") {
    SynthOptions o;
    o.n_sessions = 60;
    o.n_noise = 2;
    const auto d = synth_dataset(o);
    const auto c = ExperimentConfig::from_json(
        R"({"feature_sets":["synth"],"k_outer":3,"k_inner":2,"classifiers":["knn","gnb"],"seed":1})");
    const auto r = run_experiment(d, c, 1);
    CHECK(r.alpha_bon == 0.01);
    CHECK(r.class_counts.size() == 3);
    CHECK(r.settings[0].classifiers.size() == 2);
    CHECK(r.settings[0].classifiers[0].folds.size() == 3);
    const auto csv = report_to_csv(r);
    CHECK(csv.rfind("group,setting,classifier,f1_mean,f1_std,acc_mean,acc_std,p_value,significant", 0) == 0);
    const auto table = render_report(nlohmann::json::parse(report_json_text(r)));
    CHECK(table.find("alpha_bon 0.01") != std::string::npos);
    CHECK(selection_rate(r.settings[0], "synth.planted") > 0.9);
  }

  TEST_CASE("pfi csv round trip") {
    std::vector<PfiResult> rows(2);
    rows[0] = {"a", 0.9, 0.1, 0.01, 10, 100, {}};
    rows[1] = {"b", 0.8, -0.05, 0.02, 3, 100, {}};
    const auto back = pfi_from_csv(pfi_to_csv(rows));
    REQUIRE(back.size() == 2);
    CHECK(back[1].feature_name == "b");
    CHECK(back[1].mean_delta == -0.05);
    CHECK(back[0].selection_count == 10);
  }
}
