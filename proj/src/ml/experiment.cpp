#include "viscom/ml/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "viscom/features.hpp"
#include "viscom/ml/cv.hpp"
#include "viscom/ml/metrics.hpp"
#include "viscom/ml/parallel.hpp"
#include "viscom/ml/rng.hpp"
#include "viscom/ml/stats.hpp"
#include "viscom/session.hpp"
#include "viscom/version.hpp"

namespace viscom::ml {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string mode_name(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::kFull:
      return "full";
    case ExperimentMode::kSubsets:
      return "subsets";
    case ExperimentMode::kCombination:
      return "combination";
  }
  return "full";
}

template <typename T>
T get_as(const nlohmann::json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("experiment config: bad value for '" + key + "'");
  }
}

std::size_t positive(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw ConfigError("experiment config: '" + key + "' must be a positive integer");
  }
  return j.get<std::size_t>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentConfig c;
  static const std::set<std::string> kKeys = {
      "feature_sets", "mode",    "k_outer", "k_inner",     "gamma_policy", "gammas",
      "combination_gamma", "repeats", "alpha", "n_settings", "seed",     "classifiers",
      "importance"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.count(key)) throw ConfigError("experiment config: unknown key '" + key + "'");
  }
  if (!doc.contains("feature_sets") || !doc["feature_sets"].is_array() ||
      doc["feature_sets"].empty()) {
    throw ConfigError("experiment config: 'feature_sets' must be a non-empty array");
  }
  for (const auto& fs : doc["feature_sets"]) {
    FeatureSetSpec spec;
    if (fs.is_string()) {
      spec.name = fs.get<std::string>();
      spec.prefixes = {spec.name};
    } else if (fs.is_object() && fs.contains("name") && fs.contains("prefixes")) {
      spec.name = get_as<std::string>(fs["name"], "feature_sets.name");
      spec.prefixes = get_as<std::vector<std::string>>(fs["prefixes"], "feature_sets.prefixes");
    } else {
      throw ConfigError("experiment config: feature set must be a prefix or {name, prefixes}");
    }
    if (spec.prefixes.empty()) throw ConfigError("feature set '" + spec.name + "' has no prefixes");
    c.feature_sets.push_back(std::move(spec));
  }
  if (doc.contains("mode")) {
    const auto m = get_as<std::string>(doc["mode"], "mode");
    if (m == "full") {
      c.mode = ExperimentMode::kFull;
    } else if (m == "subsets") {
      c.mode = ExperimentMode::kSubsets;
    } else if (m == "combination") {
      c.mode = ExperimentMode::kCombination;
    } else {
      throw ConfigError("experiment config: unknown mode '" + m + "'");
    }
  }
  if (doc.contains("k_outer")) c.k_outer = positive(doc["k_outer"], "k_outer");
  if (doc.contains("k_inner")) c.k_inner = positive(doc["k_inner"], "k_inner");
  if (c.k_outer < 2 || c.k_inner < 2) throw ConfigError("experiment config: k must be >= 2");
  if (doc.contains("gamma_policy")) {
    const auto& g = doc["gamma_policy"];
    if (g.is_string() && (g == "grid" || g == "none")) {
      c.gamma_policy = g.get<std::string>();
    } else if (g.is_number_integer()) {
      c.gamma_policy = "fixed";
      c.fixed_gamma = positive(g, "gamma_policy");
    } else {
      throw ConfigError("experiment config: gamma_policy must be \"grid\", \"none\" or an integer");
    }
  }
  if (doc.contains("gammas")) {
    if (!doc["gammas"].is_array() || doc["gammas"].empty()) {
      throw ConfigError("experiment config: 'gammas' must be a non-empty array");
    }
    c.gammas.clear();
    for (const auto& g : doc["gammas"]) c.gammas.push_back(positive(g, "gammas"));
  }
  if (doc.contains("combination_gamma")) {
    c.combination_gamma = positive(doc["combination_gamma"], "combination_gamma");
  }
  if (doc.contains("repeats")) c.repeats = static_cast<int>(positive(doc["repeats"], "repeats"));
  if (doc.contains("alpha")) {
    c.alpha = get_as<double>(doc["alpha"], "alpha");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("experiment config: alpha must lie in (0, 1)");
  }
  if (doc.contains("n_settings")) {
    c.n_settings = static_cast<int>(positive(doc["n_settings"], "n_settings"));
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !(doc["seed"].is_number_integer() && doc["seed"].get<long long>() >= 0)) {
      throw ConfigError("experiment config: seed must be a non-negative integer");
    }
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("classifiers")) {
    c.classifiers = get_as<std::vector<std::string>>(doc["classifiers"], "classifiers");
    if (c.classifiers.empty()) throw ConfigError("experiment config: no classifiers");
  }
  for (const auto& name : c.classifiers) {
    try {
      classifier_info(name);
    } catch (const std::out_of_range&) {
      throw ConfigError("experiment config: unknown classifier '" + name + "'");
    }
  }
  if (doc.contains("importance")) {
    const auto& imp = doc["importance"];
    if (!imp.is_object()) throw ConfigError("experiment config: 'importance' must be an object");
    for (const auto& [key, value] : imp.items()) {
      if (key != "classifier" && key != "setting") {
        throw ConfigError("experiment config: unknown key 'importance." + key + "'");
      }
    }
    if (imp.contains("classifier")) {
      c.importance_classifier = get_as<std::string>(imp["classifier"], "importance.classifier");
      try {
        classifier_info(c.importance_classifier);
      } catch (const std::out_of_range&) {
        throw ConfigError("experiment config: unknown classifier '" + c.importance_classifier + "'");
      }
    }
    if (imp.contains("setting")) {
      c.importance_setting = get_as<std::string>(imp["setting"], "importance.setting");
    }
  }
  return c;
}

ordered_json ExperimentConfig::to_json() const {
  ordered_json j;
  j["feature_sets"] = ordered_json::array();
  for (const auto& fs : feature_sets) {
    ordered_json f;
    f["name"] = fs.name;
    f["prefixes"] = fs.prefixes;
    j["feature_sets"].push_back(f);
  }
  j["mode"] = mode_name(mode);
  j["k_outer"] = k_outer;
  j["k_inner"] = k_inner;
  if (fixed_gamma) {
    j["gamma_policy"] = *fixed_gamma;
  } else {
    j["gamma_policy"] = gamma_policy;
  }
  j["gammas"] = gammas;
  j["combination_gamma"] = combination_gamma;
  j["repeats"] = repeats;
  j["alpha"] = alpha;
  j["n_settings"] = n_settings;
  j["seed"] = seed;
  j["classifiers"] = classifiers;
  j["importance"] = {{"classifier", importance_classifier}, {"setting", importance_setting}};
  return j;
}

std::vector<Setting> build_settings(const ExperimentConfig& config,
                                    const std::vector<std::string>& feature_names) {
  std::vector<std::vector<std::size_t>> set_columns;
  for (const auto& fs : config.feature_sets) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
      for (const auto& p : fs.prefixes) {
        if (registry::has_prefix(feature_names[i], p)) {
          cols.push_back(i);
          break;
        }
      }
    }
    if (cols.empty()) throw ConfigError("feature set '" + fs.name + "' matches no column");
    set_columns.push_back(std::move(cols));
  }

  auto primary_plan = [&](std::size_t) {
    SelectionPlan plan;
    if (config.gamma_policy == "none") {
      plan.mode = SelectionPlan::Mode::kNone;
    } else if (config.fixed_gamma) {
      plan.mode = SelectionPlan::Mode::kGrid;
      plan.gammas = {*config.fixed_gamma};
    } else {
      plan.mode = SelectionPlan::Mode::kGrid;
      plan.gammas = config.gammas;
    }
    return plan;
  };

  std::vector<Setting> out;
  switch (config.mode) {
    case ExperimentMode::kFull:
      for (std::size_t i = 0; i < set_columns.size(); ++i) {
        Setting s;
        s.name = config.feature_sets[i].name;
        s.group = "full";
        s.selection = config.gamma_policy;
        s.columns = set_columns[i];
        s.plan = primary_plan(s.columns.size());
        out.push_back(std::move(s));
      }
      break;
    case ExperimentMode::kSubsets:
      for (std::size_t i = 0; i < set_columns.size(); ++i) {
        Setting with;
        with.name = config.feature_sets[i].name + " [fs]";
        with.group = "subset";
        with.selection = config.fixed_gamma ? "fixed" : "grid";
        with.columns = set_columns[i];
        with.plan.mode = SelectionPlan::Mode::kGrid;
        with.plan.gammas = config.fixed_gamma ? std::vector<std::size_t>{*config.fixed_gamma}
                                              : config.gammas;
        Setting without;
        without.name = config.feature_sets[i].name + " [no-fs]";
        without.group = "subset";
        without.selection = "none";
        without.columns = set_columns[i];
        out.push_back(std::move(with));
        out.push_back(std::move(without));
      }
      break;
    case ExperimentMode::kCombination: {
      Setting s;
      s.group = "combination";
      s.selection = "forced";
      std::set<std::size_t> all;
      for (std::size_t i = 0; i < set_columns.size(); ++i) {
        s.name += (i ? "+" : "") + config.feature_sets[i].name;
        all.insert(set_columns[i].begin(), set_columns[i].end());
      }
      s.columns.assign(all.begin(), all.end());
      s.plan.mode = SelectionPlan::Mode::kForced;
      for (const auto& cols : set_columns) {
        SelectionGroup g;
        for (std::size_t c : cols) {
          g.columns.push_back(static_cast<std::size_t>(
              std::lower_bound(s.columns.begin(), s.columns.end(), c) - s.columns.begin()));
        }
        g.gamma = std::min(config.combination_gamma, cols.size());
        s.plan.groups.push_back(std::move(g));
      }
      out.push_back(std::move(s));
      break;
    }
  }
  return out;
}

namespace {

Summary summarize(const std::vector<double>& f1, const std::vector<double>& acc) {
  Summary s;
  s.f1_mean = mean(f1);
  s.f1_std = sample_sd(f1);
  s.acc_mean = mean(acc);
  s.acc_std = sample_sd(acc);
  return s;
}

std::vector<Fold> outer_folds(const Dataset& data, const ExperimentConfig& config) {
  if (config.k_outer > data.size()) {
    throw ConfigError("k_outer " + std::to_string(config.k_outer) + " exceeds " +
                      std::to_string(data.size()) + " rows");
  }
  return stratified_kfold(data.y, config.k_outer, derive_seed(config.seed, {tag("outer")}));
}

struct Task {
  std::size_t setting;
  std::size_t classifier;
  std::size_t fold;
};

}  // namespace

ExperimentReport run_experiment(const Dataset& data, const ExperimentConfig& config,
                                std::size_t workers) {
  const auto settings = build_settings(config, data.feature_names);
  const auto folds = outer_folds(data, config);

  ExperimentReport report;
  report.seed = config.seed;
  report.config = config.to_json();
  report.n_rows = data.size();
  report.class_counts.assign(data.n_classes, 0);
  for (int c : data.y) ++report.class_counts[c];
  report.alpha = config.alpha;
  report.n_settings = config.n_settings;
  report.alpha_bon = config.alpha_bon();

  for (BaselineKind kind :
       {BaselineKind::kMostFrequent, BaselineKind::kStratified, BaselineKind::kUniform}) {
    BaselineResult b;
    b.name = to_string(kind);
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const auto train = train_indices(folds[f], data.size());
      std::vector<int> train_y, test_y;
      for (std::size_t i : train) train_y.push_back(data.y[i]);
      for (std::size_t i : folds[f]) test_y.push_back(data.y[i]);
      const auto pred = baseline_predict(
          kind, train_y, test_y.size(), data.n_classes,
          derive_seed(config.seed, {tag("baseline"), static_cast<std::uint64_t>(kind), f}));
      const auto cm = ConfusionMatrix::from(test_y, pred, data.n_classes);
      b.fold_accuracy.push_back(micro_accuracy(cm));
      b.fold_f1.push_back(macro_f1(cm));
    }
    b.summary = summarize(b.fold_f1, b.fold_accuracy);
    if (report.baselines.empty() || b.summary.acc_mean > report.baseline_accuracy) {
      report.baseline_accuracy = b.summary.acc_mean;
      report.best_baseline = b.name;
    }
    report.baselines.push_back(std::move(b));
  }

  std::vector<Dataset> setting_data;
  for (const Setting& s : settings) setting_data.push_back(data.select_columns(s.columns));

  std::vector<Task> tasks;
  for (std::size_t s = 0; s < settings.size(); ++s) {
    for (std::size_t c = 0; c < config.classifiers.size(); ++c) {
      for (std::size_t f = 0; f < folds.size(); ++f) tasks.push_back({s, c, f});
    }
  }
  std::vector<FoldResult> results(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    const Task& t = tasks[i];
    const Setting& setting = settings[t.setting];
    const Dataset& sd = setting_data[t.setting];
    const ClassifierInfo& info = classifier_info(config.classifiers[t.classifier]);
    const Dataset train = sd.subset(train_indices(folds[t.fold], sd.size()));
    const Dataset test = sd.subset(folds[t.fold]);
    const std::uint64_t seed =
        derive_seed(config.seed, {tag(setting.name), tag(info.name), t.fold});
    const GridChoice choice = grid_search(info, train, setting.plan, config.k_inner, seed);
    const FittedPipeline fp = fit_pipeline(info, choice.params, setting.plan, choice.gamma,
                                           train, derive_seed(seed, {tag("final")}));
    const auto cm = ConfusionMatrix::from(test.y, fp.predict(test.x), sd.n_classes);
    FoldResult r;
    r.fold = t.fold;
    r.accuracy = micro_accuracy(cm);
    r.f1 = macro_f1(cm);
    r.params = choice.params;
    r.gamma = choice.gamma;
    for (std::size_t c : fp.prep.selected) r.selected.push_back(sd.feature_names[c]);
    results[i] = std::move(r);
  });

  std::size_t k = 0;
  for (std::size_t s = 0; s < settings.size(); ++s) {
    SettingResult sr;
    sr.name = settings[s].name;
    sr.group = settings[s].group;
    sr.selection = settings[s].selection;
    sr.n_features = settings[s].columns.size();
    std::vector<double> f1_means, acc_means;
    for (std::size_t c = 0; c < config.classifiers.size(); ++c) {
      ClassifierResult cr;
      cr.name = config.classifiers[c];
      std::vector<double> f1, acc;
      for (std::size_t f = 0; f < folds.size(); ++f) {
        f1.push_back(results[k].f1);
        acc.push_back(results[k].accuracy);
        cr.folds.push_back(std::move(results[k]));
        ++k;
      }
      cr.summary = summarize(f1, acc);
      f1_means.push_back(cr.summary.f1_mean);
      acc_means.push_back(cr.summary.acc_mean);
      sr.classifiers.push_back(std::move(cr));
    }
    sr.aggregate = summarize(f1_means, acc_means);
    try {
      const auto tt = t_test_one_sided(acc_means, report.baseline_accuracy);
      sr.t = tt.t;
      sr.p_value = tt.p_value;
    } catch (const DegenerateSample&) {
      sr.degenerate_sample = true;
      sr.t = 0.0;
      sr.p_value = mean(acc_means) > report.baseline_accuracy ? 0.0 : 1.0;
    }
    sr.significant = sr.p_value < report.alpha_bon;
    report.settings.push_back(std::move(sr));
  }
  return report;
}

std::vector<PfiResult> run_importance(const Dataset& data, const ExperimentConfig& config,
                                      std::size_t workers) {
  const auto settings = build_settings(config, data.feature_names);
  const Setting* setting = &settings.front();
  if (!config.importance_setting.empty()) {
    setting = nullptr;
    for (const Setting& s : settings) {
      if (s.name == config.importance_setting) setting = &s;
    }
    if (setting == nullptr) {
      throw ConfigError("importance setting '" + config.importance_setting + "' not found");
    }
  }
  const auto folds = outer_folds(data, config);
  const Dataset sd = data.select_columns(setting->columns);
  const ClassifierInfo& info = classifier_info(config.importance_classifier);

  std::vector<std::vector<PfiResult>> per_fold(folds.size());
  parallel_for(folds.size(), workers, [&](std::size_t f) {
    const Dataset train = sd.subset(train_indices(folds[f], sd.size()));
    const Dataset test = sd.subset(folds[f]);
    const std::uint64_t seed = derive_seed(config.seed, {tag(setting->name), tag(info.name), f});
    const GridChoice choice = grid_search(info, train, setting->plan, config.k_inner, seed);
    const FittedPipeline fp = fit_pipeline(info, choice.params, setting->plan, choice.gamma,
                                           train, derive_seed(seed, {tag("final")}));
    per_fold[f] = permutation_importance(fp, test, config.repeats,
                                         derive_seed(seed, {tag("pfi")}));
  });

  std::map<std::string, PfiResult> pooled;
  std::map<std::string, double> ori_sum;
  for (const auto& fold : per_fold) {
    for (const PfiResult& r : fold) {
      PfiResult& p = pooled[r.feature_name];
      p.feature_name = r.feature_name;
      p.repeats = config.repeats;
      ++p.selection_count;
      ori_sum[r.feature_name] += r.accuracy_ori;
      p.deltas.insert(p.deltas.end(), r.deltas.begin(), r.deltas.end());
    }
  }
  std::vector<PfiResult> out;
  for (auto& [name, p] : pooled) {
    p.mean_delta = mean(p.deltas);
    p.std_delta = sample_sd(p.deltas);
    p.accuracy_ori = ori_sum[name] / p.selection_count;
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(), [](const PfiResult& a, const PfiResult& b) {
    return a.mean_delta > b.mean_delta;
  });
  return out;
}

namespace {

ordered_json summary_json(const Summary& s) {
  ordered_json j;
  j["f1_mean"] = s.f1_mean;
  j["f1_std"] = s.f1_std;
  j["acc_mean"] = s.acc_mean;
  j["acc_std"] = s.acc_std;
  return j;
}

}  // namespace

ordered_json report_to_json(const ExperimentReport& r) {
  ordered_json j;
  j["tool"] = std::string(kToolName) + " " + kToolVersion;
  j["seed"] = r.seed;
  j["config"] = r.config;
  j["n_rows"] = r.n_rows;
  j["class_counts"] = {{"low", r.class_counts.at(0)},
                       {"moderate", r.class_counts.at(1)},
                       {"high", r.class_counts.at(2)}};
  j["alpha"] = r.alpha;
  j["n_settings"] = r.n_settings;
  j["alpha_bon"] = r.alpha_bon;
  j["baselines"] = ordered_json::array();
  for (const auto& b : r.baselines) {
    ordered_json bj;
    bj["name"] = b.name;
    bj["summary"] = summary_json(b.summary);
    bj["fold_accuracy"] = b.fold_accuracy;
    bj["fold_f1"] = b.fold_f1;
    j["baselines"].push_back(bj);
  }
  j["best_baseline"] = r.best_baseline;
  j["baseline_accuracy"] = r.baseline_accuracy;
  j["settings"] = ordered_json::array();
  for (const auto& s : r.settings) {
    ordered_json sj;
    sj["name"] = s.name;
    sj["group"] = s.group;
    sj["selection"] = s.selection;
    sj["n_features"] = s.n_features;
    sj["aggregate"] = summary_json(s.aggregate);
    sj["t"] = s.t;
    sj["p_value"] = s.p_value;
    sj["degenerate_sample"] = s.degenerate_sample;
    sj["significant"] = s.significant;
    sj["classifiers"] = ordered_json::array();
    for (const auto& c : s.classifiers) {
      ordered_json cj;
      cj["name"] = c.name;
      cj["summary"] = summary_json(c.summary);
      cj["folds"] = ordered_json::array();
      for (const auto& f : c.folds) {
        ordered_json fj;
        fj["fold"] = f.fold;
        fj["accuracy"] = f.accuracy;
        fj["f1"] = f.f1;
        fj["params"] = ordered_json::parse(f.params.dump());
        fj["gamma"] = f.gamma ? ordered_json(*f.gamma) : ordered_json(nullptr);
        fj["selected"] = f.selected;
        cj["folds"].push_back(fj);
      }
      sj["classifiers"].push_back(cj);
    }
    j["settings"].push_back(sj);
  }
  return j;
}

std::string report_json_text(const ExperimentReport& r) { return report_to_json(r).dump(1) + "\n"; }

std::string report_to_csv(const ExperimentReport& r) {
  std::string out = "group,setting,classifier,f1_mean,f1_std,acc_mean,acc_std,p_value,significant\n";
  auto row = [&](const std::string& group, const std::string& setting, const std::string& clf,
                 const Summary& s, const std::string& p, const std::string& sig) {
    out += csv_field(group) + "," + csv_field(setting) + "," + csv_field(clf) + "," +
           format_number(s.f1_mean) + "," + format_number(s.f1_std) + "," +
           format_number(s.acc_mean) + "," + format_number(s.acc_std) + "," + p + "," + sig + "\n";
  };
  for (const auto& b : r.baselines) row("baseline", b.name, "", b.summary, "", "");
  for (const auto& s : r.settings) {
    row(s.group, s.name, "all", s.aggregate, format_number(s.p_value),
        s.significant ? "true" : "false");
    for (const auto& c : s.classifiers) row(s.group, s.name, c.name, c.summary, "", "");
  }
  return out;
}

namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string summary_cells(const nlohmann::json& s) {
  return pad(pct(s.at("f1_mean").get<double>()) + " +- " + pct(s.at("f1_std").get<double>()), 16) +
         pad(pct(s.at("acc_mean").get<double>()) + " +- " + pct(s.at("acc_std").get<double>()), 16);
}

}  // namespace

std::string render_report(const nlohmann::json& report) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s  seed %llu  rows %llu\n",
                report.at("tool").get<std::string>().c_str(),
                static_cast<unsigned long long>(report.at("seed").get<std::uint64_t>()),
                static_cast<unsigned long long>(report.at("n_rows").get<std::uint64_t>()));
  out += buf;
  std::snprintf(buf, sizeof buf, "alpha %g  settings %d  alpha_bon %g\n",
                report.at("alpha").get<double>(), report.at("n_settings").get<int>(),
                report.at("alpha_bon").get<double>());
  out += buf;
  out += "best baseline " + report.at("best_baseline").get<std::string>() + " (" +
         pct(report.at("baseline_accuracy").get<double>()) + "% accuracy)\n\n";
  out += pad("group", 13) + pad("setting", 28) + pad("F1 (%)", 16) + pad("Acc (%)", 16) +
         pad("p", 12) + "sig\n";
  for (const auto& b : report.at("baselines")) {
    out += pad("baseline", 13) + pad(b.at("name").get<std::string>(), 28) +
           summary_cells(b.at("summary")) + "\n";
  }
  for (const auto& s : report.at("settings")) {
    std::snprintf(buf, sizeof buf, "%.3g", s.at("p_value").get<double>());
    out += pad(s.at("group").get<std::string>(), 13) + pad(s.at("name").get<std::string>(), 28) +
           summary_cells(s.at("aggregate")) + pad(buf, 12) +
           (s.at("significant").get<bool>() ? "*" : "") + "\n";
    for (const auto& c : s.at("classifiers")) {
      out += pad("", 13) + pad("  " + c.at("name").get<std::string>(), 28) +
             summary_cells(c.at("summary")) + "\n";
    }
  }
  return out;
}

std::string pfi_to_csv(const std::vector<PfiResult>& rows) {
  std::string out = "feature,selection_count,mean_delta,std_delta,accuracy_ori,repeats\n";
  for (const auto& r : rows) {
    out += csv_field(r.feature_name) + "," + std::to_string(r.selection_count) + "," +
           format_number(r.mean_delta) + "," + format_number(r.std_delta) + "," +
           format_number(r.accuracy_ori) + "," + std::to_string(r.repeats) + "\n";
  }
  return out;
}

std::vector<PfiResult> pfi_from_csv(const std::string& text) {
  const auto records = parse_csv_records(text);
  if (records.empty() || records.front().size() != 6 || records.front()[0] != "feature") {
    throw std::invalid_argument("pfi.csv header mismatch");
  }
  std::vector<PfiResult> out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.size() != 6) throw std::invalid_argument("pfi.csv row has wrong arity");
    PfiResult p;
    p.feature_name = r[0];
    p.selection_count = std::stoi(r[1]);
    p.mean_delta = std::stod(r[2]);
    p.std_delta = std::stod(r[3]);
    p.accuracy_ori = std::stod(r[4]);
    p.repeats = std::stoi(r[5]);
    out.push_back(std::move(p));
  }
  return out;
}

double selection_rate(const SettingResult& setting, const std::string& feature) {
  std::size_t total = 0, hits = 0;
  for (const auto& c : setting.classifiers) {
    for (const auto& f : c.folds) {
      ++total;
      hits += std::find(f.selected.begin(), f.selected.end(), feature) != f.selected.end();
    }
  }
  return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

}  // namespace viscom::ml
