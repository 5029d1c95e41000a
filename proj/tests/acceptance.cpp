// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "viscom/aesthetics.hpp"
#include "viscom/cli.hpp"
#include "viscom/features.hpp"
#include "viscom/ml/cv.hpp"
#include "viscom/ml/dataset.hpp"
#include "viscom/ml/experiment.hpp"
#include "viscom/ml/metrics.hpp"
#include "viscom/ml/pipeline.hpp"
#include "viscom/ml/stats.hpp"
#include "viscom/session.hpp"
#include "viscom/snapshot.hpp"
#include "viscom/synth.hpp"
#include "viscom/vips.hpp"

using namespace viscom;
using namespace viscom::ml;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      out_.pass = false;
      if (failures_++ < 5) note("failed: " + what);
    }
  }
  void note(const std::string& s) { out_.detail += (out_.detail.empty() ? "" : "; ") + s; }
  Outcome result() {
    if (failures_ > 5) note(std::to_string(failures_) + " failures in total");
    return out_;
  }

 private:
  Outcome out_;
  int failures_ = 0;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string fixture(const std::string& rel) {
  return (fs::path(VISCOM_FIXTURES) / rel).string();
}

std::vector<int> label_multiset() {
  std::vector<int> y;
  y.insert(y.end(), 43, 0);
  y.insert(y.end(), 41, 1);
  y.insert(y.end(), 28, 2);
  return y;
}

Outcome registry_arithmetic() {
  Check c;
  c.expect(registry::aesthetics().size() == 70, "aesthetics 70");
  c.expect(registry::layout().size() == 5, "layout 5");
  c.expect(registry::visual().size() == 8, "visual 8");
  c.expect(registry::html().size() == 31, "html 31");
  c.expect(registry::viscom().size() == 114, "viscom 114");
  c.expect(registry::texcom().size() == 32, "texcom 32");
  c.expect(registry::webrel(registry::kDefaultFactCount).size() == 10, "webrel 10");
  c.expect(registry::query().size() == 11, "query 11");
  const double frac = 100.0 * registry::aesthetics().size() / registry::viscom().size();
  c.expect(fmt("%.1f", frac) == "61.4", "aesthetics fraction 61.4%");
  c.note("aesthetics share " + fmt("%.1f", frac) + "%");
  return c.result();
}

Outcome baselines() {
  Check c;
  const auto y = label_multiset();
  const auto mf = baseline_predict(BaselineKind::kMostFrequent, y, y.size(), 3, 0);
  const auto cm = ConfusionMatrix::from(y, mf, 3);
  const double acc = 100.0 * micro_accuracy(cm), f1 = 100.0 * macro_f1(cm);
  c.expect(std::abs(acc - 38.4) <= 0.1, "most-frequent accuracy vs 38.4");
  c.expect(std::abs(f1 - 18.5) <= 0.1, "most-frequent macro-F1 vs 18.5");
  double strat = 0.0, uni = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    strat += micro_accuracy(ConfusionMatrix::from(
        y, baseline_predict(BaselineKind::kStratified, y, y.size(), 3, seed), 3));
    uni += micro_accuracy(ConfusionMatrix::from(
        y, baseline_predict(BaselineKind::kUniform, y, y.size(), 3, seed), 3));
  }
  strat = 100.0 * strat / 1000.0;
  uni = 100.0 * uni / 1000.0;
  const double sum_p2 = 100.0 * (43.0 * 43 + 41.0 * 41 + 28.0 * 28) / (112.0 * 112);
  c.expect(std::abs(strat - sum_p2) <= 2.0, "stratified vs sum p^2");
  c.expect(std::abs(uni - 100.0 / 3.0) <= 2.0, "uniform vs 1/3");
  c.note("mf acc " + fmt("%.2f", acc) + " f1 " + fmt("%.2f", f1) + ", stratified " +
         fmt("%.2f", strat) + " (sum p^2 " + fmt("%.2f", sum_p2) + "), uniform " + fmt("%.2f", uni));
  return c.result();
}

Outcome bonferroni_thresholds() {
  Check c;
  c.expect(bonferroni(0.05, 5) == 0.01, "n=5 -> 0.01");
  c.expect(bonferroni(0.05, 8) == 0.00625, "n=8 -> 0.00625");
  ExperimentConfig cfg;
  cfg.n_settings = 5;
  c.expect(cfg.alpha_bon() == 0.01, "config alpha_bon");
  return c.result();
}

KgClass expected_class(double z) {
  if (z < -0.5) return KgClass::kLow;
  if (z > 0.5) return KgClass::kHigh;
  return KgClass::kModerate;
}

Outcome kg_labeling() {
  Check c;
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> len(2, 120);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> kg(static_cast<std::size_t>(len(gen)));
    for (double& v : kg) v = u(gen);
    const auto labels = label_classes(kg);
    c.expect(labels.size() == kg.size(), "one label per value");
    for (const auto& l : labels) {
      c.expect(l.cls == expected_class(l.z), "partition by z");
    }
    const double a = std::exp(3.0 * u(gen)), b = 5.0 * u(gen);
    std::vector<double> moved(kg);
    for (double& v : moved) v = a * v + b;
    const auto again = label_classes(moved);
    for (std::size_t i = 0; i < kg.size(); ++i) {
      c.expect(again[i].cls == labels[i].cls, "affine invariance");
    }
  }
  // Population sd is 2 * 2^k exactly, so the +-1 * 2^k entries land on z = +-0.5.
  for (int k = -4; k <= 4; ++k) {
    const double s = std::ldexp(1.0, k);
    const double shift = std::ldexp(static_cast<double>(k), 2);
    std::vector<double> kg;
    for (double v : {1.0, -1.0, 3.0, -3.0, 3.0, -3.0, 1.0, -1.0, 0.0, 0.0}) kg.push_back(v * s + shift);
    const auto labels = label_classes(kg);
    c.expect(std::abs(labels[0].z) == 0.5 && std::abs(labels[1].z) == 0.5, "exact boundary z");
    c.expect(labels[0].cls == KgClass::kModerate && labels[1].cls == KgClass::kModerate,
             "boundary maps to moderate");
  }
  bool threw = false;
  try {
    label_classes({0.2, 0.2, 0.2});
  } catch (const DegenerateDistribution&) {
    threw = true;
  }
  c.expect(threw, "zero variance rejected");
  c.note("2000 random lists with affine transforms, 9 exact-boundary lists");
  return c.result();
}

Outcome vips_fixtures() {
  Check c;
  struct Expected {
    const char* id;
    int pdoc;
    std::size_t non_leaf, leaf, layers;
    std::vector<BlockKind> kinds;
  };
  using K = BlockKind;
  const std::vector<Expected> cases = {
      {"f1_single", 6, 0, 1, 1, {K::kText}},
      {"f2_columns", 6, 1, 2, 2, {K::kText, K::kImage}},
      {"f3_sections", 6, 2, 4, 3, {K::kText, K::kText, K::kText, K::kForm}},
      {"f4_pdoc", 6, 1, 2, 2, {K::kText, K::kText}},
      {"f4_pdoc", 8, 2, 3, 3, {K::kText, K::kText, K::kText}},
      {"f5_rule_hidden", 6, 1, 2, 2, {K::kText, K::kImage}},
  };
  for (const auto& e : cases) {
    const auto page = load_snapshot(fixture(std::string("bundles/") + e.id));
    const auto tree = segment_vips(page.geometry, e.pdoc);
    const auto shape = tree_shape(tree);
    std::vector<BlockKind> kinds;
    for (const VipsBlock* b : leaves(tree)) kinds.push_back(b->kind);
    const std::string label = std::string(e.id) + "@" + std::to_string(e.pdoc);
    c.expect(shape.non_leaf == e.non_leaf, label + " non-leaf count");
    c.expect(shape.leaf == e.leaf, label + " leaf count");
    c.expect(shape.layers == e.layers, label + " layers");
    c.expect(kinds == e.kinds, label + " leaf kinds");
  }
  c.note("5 fixtures, 6 trees");
  return c.result();
}

ObjectSet random_set(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ObjectSet o;
  o.page_width = 200.0 + 1800.0 * u(gen);
  o.page_height = 200.0 + 4000.0 * u(gen);
  const int n = 1 + static_cast<int>(gen() % 25);
  for (int i = 0; i < n; ++i) {
    const double w = o.page_width * (0.01 + 0.6 * u(gen));
    const double h = o.page_height * (0.005 + 0.4 * u(gen));
    const double x = (o.page_width - w) * u(gen);
    const double y = (o.page_height - h) * u(gen);
    o.objects.push_back({{x, y, w, h}, static_cast<ObjectClass>(gen() % 4)});
  }
  return o;
}

ObjectSet mirrored_set(std::mt19937_64& gen) {
  ObjectSet o;
  const int hw = 50 + static_cast<int>(gen() % 500), hh = 50 + static_cast<int>(gen() % 1500);
  o.page_width = 2.0 * hw;
  o.page_height = 2.0 * hh;
  const int n = 1 + static_cast<int>(gen() % 6);
  for (int i = 0; i < n; ++i) {
    const int w = 1 + static_cast<int>(gen() % hw), h = 1 + static_cast<int>(gen() % hh);
    const int x = static_cast<int>(gen() % static_cast<unsigned>(hw - w + 1));
    const int y = static_cast<int>(gen() % static_cast<unsigned>(hh - h + 1));
    for (int m = 0; m < 4; ++m) {
      Rect r{double(x), double(y), double(w), double(h)};
      if (m & 1) r.x = o.page_width - r.x - r.w;
      if (m & 2) r.y = o.page_height - r.y - r.h;
      o.objects.push_back({r, ObjectClass::kOther});
    }
  }
  return o;
}

Outcome aesthetics_invariants() {
  Check c;
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_scale = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const ObjectSet o = random_set(gen);
    const auto block = aesthetics_block(o);
    double sum = 0.0;
    for (int m = 0; m < kMeasureCount; ++m) {
      c.expect(block[m] >= 0.0 && block[m] <= 1.0, "measure " + std::to_string(m + 1) + " in [0,1]");
      sum += block[m];
    }
    c.expect(std::abs(block[kMeasureCount] - sum / kMeasureCount) <= 1e-12,
             "order_and_complexity equals the mean");
    const double s = std::exp(4.0 * u(gen) - 2.0);
    ObjectSet scaled = o;
    scaled.page_width *= s;
    scaled.page_height *= s;
    for (auto& obj : scaled.objects) obj.box = {obj.box.x * s, obj.box.y * s, obj.box.w * s, obj.box.h * s};
    const auto scaled_block = aesthetics_block(scaled);
    for (int m = 0; m <= kMeasureCount; ++m) {
      const double d = std::abs(scaled_block[m] - block[m]);
      worst_scale = std::max(worst_scale, d);
      c.expect(d <= 1e-9, "scale invariance of measure " + std::to_string(m + 1));
    }
  }
  for (int trial = 0; trial < 2000; ++trial) {
    const ObjectSet o = mirrored_set(gen);
    c.expect(aesthetic_measure(Measure::kSymmetry, o) == 1.0, "mirrored symmetry = 1");
    c.expect(aesthetic_measure(Measure::kBalance, o) == 1.0, "mirrored balance = 1");
    c.expect(aesthetic_measure(Measure::kEquilibrium, o) == 1.0, "mirrored equilibrium = 1");
  }
  for (int trial = 0; trial < 500; ++trial) {
    ObjectSet o;
    o.page_width = 2.0 * (10 + static_cast<int>(gen() % 1000));
    o.page_height = 10.0 + static_cast<double>(gen() % 3000);
    const int strips = 1 + static_cast<int>(gen() % 5);
    const double half = o.page_width / 2.0;
    for (int i = 0; i < strips; ++i) {
      o.objects.push_back({{half * i / strips, 0.0, half / strips, o.page_height}, ObjectClass::kOther});
    }
    c.expect(std::abs(aesthetic_measure(Measure::kDensity, o) - 1.0) <= 1e-12, "density at coverage 0.5");
  }
  c.note("10^4 fuzzed sets, worst scale deviation " + fmt("%.1e", worst_scale) +
         ", 2000 mirrored layouts, 500 half-coverage pages");
  return c.result();
}

Dataset synth_dataset(const SynthOptions& o) {
  const auto d = generate_synthetic(o);
  return join_dataset(d.features, d.labels);
}

Outcome end_to_end_synthetic() {
  Check c;
  SynthOptions o;
  o.seed = 42;
  const Dataset data = synth_dataset(o);
  c.expect(data.size() == 112, "112 sessions");
  auto cfg = ExperimentConfig::from_json(
      R"({"feature_sets":["synth"],"mode":"full","k_outer":10,"k_inner":3,"gamma_policy":"grid",
          "gammas":[1,5,10,15,20],"alpha":0.05,"n_settings":5,"seed":42})");
  const auto report = run_experiment(data, cfg, 1);
  const auto& s = report.settings.front();
  const double rate = selection_rate(s, "synth.planted");
  std::size_t gamma_one = 0, folds = 0;
  for (const auto& cr : s.classifiers) {
    for (const auto& f : cr.folds) {
      ++folds;
      gamma_one += f.gamma == 1u;
    }
  }
  c.expect(rate >= 0.95, "planted feature selected in >= 95% of outer folds");
  c.expect(s.aggregate.acc_mean >= 0.80, "mean accuracy >= 80%");
  c.expect(report.alpha_bon == 0.01, "alpha_bon 0.01");
  c.expect(s.significant, "significant at alpha_bon");

  int flagged = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SynthOptions n;
    n.planted = false;
    n.seed = 1000 + seed;
    auto null_cfg = cfg;
    null_cfg.seed = seed;
    flagged += run_experiment(synth_dataset(n), null_cfg, 1).settings.front().significant;
  }
  c.expect(flagged <= 5, "null significance in <= 5 of 100 runs");
  c.note("planted selected " + fmt("%.1f", 100.0 * rate) + "% of folds (gamma=1 in " +
         std::to_string(gamma_one) + "/" + std::to_string(folds) + "), acc " +
         fmt("%.1f", 100.0 * s.aggregate.acc_mean) + "%, p " + fmt("%.2e", s.p_value) +
         ", null flagged " + std::to_string(flagged) + "/100");
  return c.result();
}

Outcome pfi() {
  Check c;
  SynthOptions o;
  o.seed = 42;
  o.constant_feature = true;
  const Dataset data = synth_dataset(o);
  const auto cfg = ExperimentConfig::from_json(
      R"({"feature_sets":["synth"],"gamma_policy":"none","repeats":100,"seed":42,
          "importance":{"classifier":"knn"}})");
  const auto rows = run_importance(data, cfg, 1);
  c.expect(!rows.empty() && rows.front().feature_name == "synth.planted", "planted ranks first");
  c.expect(!rows.empty() && rows.front().mean_delta > 0.0, "planted delta positive");
  bool saw_constant = false;
  for (const auto& r : rows) {
    c.expect(r.repeats == 100, "repeats recorded as 100");
    if (r.feature_name == "synth.constant") {
      saw_constant = true;
      c.expect(r.mean_delta == 0.0, "constant mean_delta exactly 0");
    }
  }
  c.expect(saw_constant, "constant feature evaluated");
  const auto back = pfi_from_csv(pfi_to_csv(rows));
  c.expect(!back.empty() && back.front().repeats == 100, "repeats in pfi.csv");
  if (!rows.empty()) {
    c.note("top " + rows.front().feature_name + " delta " + fmt("%.3f", rows.front().mean_delta));
  }
  return c.result();
}

double t_upper_tail_oracle(double t, double df) {
  const double k = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
  auto pdf = [&](double x) { return k * std::pow(1 + x * x / df, -(df + 1) / 2); };
  const int n = 20000;
  const double h = t / n;
  double s = pdf(0) + pdf(t);
  for (int i = 1; i < n; ++i) s += pdf(i * h) * (i % 2 ? 4 : 2);
  return 0.5 - s * h / 3;
}

Outcome metric_oracles() {
  Check c;
  std::mt19937 gen(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + trial % 4;
    const std::size_t n = 1 + gen() % 60;
    std::vector<int> truth(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = static_cast<int>(gen() % k);
      pred[i] = gen() % 3 == 0 ? truth[i] : static_cast<int>(gen() % k);
    }
    double f1 = 0.0, correct = 0.0;
    for (int cls = 0; cls < k; ++cls) {
      double tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        tp += truth[i] == cls && pred[i] == cls;
        fp += truth[i] != cls && pred[i] == cls;
        fn += truth[i] == cls && pred[i] != cls;
      }
      f1 += tp + fp + fn > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) correct += truth[i] == pred[i];
    const auto cm = ConfusionMatrix::from(truth, pred, k);
    c.expect(std::abs(macro_f1(cm) - f1 / k) <= 1e-12, "macro-F1 recount");
    c.expect(std::abs(micro_accuracy(cm) - correct / n) <= 1e-12, "accuracy recount");
  }
  double worst = 0.0;
  std::normal_distribution<double> nd(0.3, 0.2);
  for (int df = 2; df <= 30; ++df) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> v(static_cast<std::size_t>(df + 1));
      for (double& x : v) x = nd(gen);
      const auto r = t_test_one_sided(v, 0.25);
      const double oracle = r.t >= 0 ? t_upper_tail_oracle(r.t, df) : 1.0 - t_upper_tail_oracle(-r.t, df);
      worst = std::max(worst, std::abs(r.p_value - oracle));
      c.expect(std::abs(r.p_value - oracle) <= 1e-6, "t-test p-value for df " + std::to_string(df));
    }
  }
  c.note("1000 confusion fuzz cases, worst p-value error " + fmt("%.1e", worst));
  return c.result();
}

std::string slurp(const std::string& p) { return read_text_file(p); }

Outcome determinism() {
  Check c;
  const auto base = fs::temp_directory_path() / "viscom_acceptance_determinism";
  fs::remove_all(base);
  fs::create_directories(base);
  std::vector<std::string> ids;
  for (const auto& e : fs::directory_iterator(fixture("bundles"))) ids.push_back(e.path().filename().string());
  std::sort(ids.begin(), ids.end());
  std::string jsonl;
  for (const auto& s : generate_sessions(ids, 60, 8)) jsonl += session_to_json_line(s) + "\n";
  write_text_file((base / "sessions.jsonl").string(), jsonl);
  write_text_file((base / "experiment.json").string(),
                  R"({"feature_sets":["viscom","texcom","webrel","query"],"k_outer":3,"k_inner":2,"gammas":[1,5],"seed":9})");

  auto run = [&](const std::string& name, const std::string& workers) {
    const std::string dir = (base / name).string();
    std::ostringstream out, err;
    int code = cli::run({"extract", fixture("bundles"), "--out-dir", dir, "--workers", workers}, out, err);
    code |= cli::run({"aggregate", (base / "sessions.jsonl").string(), dir + "/features_pages.csv",
                      "--out-dir", dir}, out, err);
    code |= cli::run({"experiment", dir + "/features.csv", dir + "/labels.csv", "--config",
                      (base / "experiment.json").string(), "--out-dir", dir, "--workers", workers},
                     out, err);
    c.expect(code == 0, name + " pipeline exit code: " + err.str());
    return dir;
  };
  const auto a = run("run_a", "1");
  const auto b = run("run_b", "4");
  const auto a2 = run("run_a2", "1");
  for (const char* f : {"features_pages.csv", "features.csv", "labels.csv", "report.json", "report.csv"}) {
    const auto ref = slurp(a + "/" + f);
    c.expect(!ref.empty(), std::string(f) + " written");
    c.expect(ref == slurp(b + "/" + f), std::string(f) + " identical for 1 vs 4 workers");
    c.expect(ref == slurp(a2 + "/" + f), std::string(f) + " identical on rerun");
  }
  c.note("extract + aggregate + experiment, 3 runs, 5 outputs compared byte for byte");
  return c.result();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"feature registry arithmetic", registry_arithmetic},
      {"baseline reproduction", baselines},
      {"bonferroni thresholds", bonferroni_thresholds},
      {"knowledge-gain labeling properties", kg_labeling},
      {"vips fixture trees", vips_fixtures},
      {"aesthetics invariants", aesthetics_invariants},
      {"end-to-end synthetic experiment", end_to_end_synthetic},
      {"permutation feature importance", pfi},
      {"metric oracles", metric_oracles},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %-36s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
