#include "viscom/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "viscom/corpus.hpp"
#include "viscom/dom_stats.hpp"
#include "viscom/features.hpp"
#include "viscom/image.hpp"
#include "viscom/ml/experiment.hpp"
#include "viscom/ml/parallel.hpp"
#include "viscom/relevance.hpp"
#include "viscom/session.hpp"
#include "viscom/snapshot.hpp"
#include "viscom/synth.hpp"
#include "viscom/version.hpp"
#include "viscom/vips.hpp"

namespace viscom::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string sha256_hex_file(const std::string& path) {
  const auto bytes = read_binary(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed for " + path);
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

namespace {

std::string now_iso() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string require_file(const std::string& path) {
  if (!fs::is_regular_file(path)) throw UserError("no such file: " + path);
  return read_text_file(path);
}

class Manifest {
 public:
  Manifest(std::string command, std::string out_dir)
      : command_(std::move(command)), out_dir_(std::move(out_dir)), started_(now_iso()) {}

  void input(const std::string& path) { inputs_.push_back(path); }
  void config(const std::string& path) { config_ = path; }
  void seed(std::uint64_t s) { seed_ = s; }
  void output(const std::string& name, const std::string& content) {
    write_text_file((fs::path(out_dir_) / name).string(), content);
    outputs_.push_back(name);
  }
  void output_binary(const std::string& name, const std::vector<std::uint8_t>& bytes) {
    write_binary((fs::path(out_dir_) / name).string(), bytes);
    outputs_.push_back(name);
  }

  void finish() {
    ordered_json j;
    j["command"] = command_;
    j["config"] = config_.empty() ? ordered_json(nullptr) : ordered_json(config_);
    j["inputs"] = inputs_;
    j["seed"] = seed_ ? ordered_json(*seed_) : ordered_json(nullptr);
    j["tool_version"] = std::string(kToolName) + " " + kToolVersion;
    j["started_at"] = started_;
    j["finished_at"] = now_iso();
    ordered_json hashes = ordered_json::object();
    for (const auto& name : outputs_) {
      hashes[name] = sha256_hex_file((fs::path(out_dir_) / name).string());
    }
    j["outputs"] = hashes;
    write_text_file((fs::path(out_dir_) / "run_manifest.json").string(), j.dump(1) + "\n");
  }

 private:
  std::string command_;
  std::string out_dir_;
  std::string started_;
  std::string config_;
  std::vector<std::string> inputs_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::string> outputs_;
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UserError("cannot create output directory " + dir + ": " + ec.message());
}

std::string registry_json(const std::vector<std::string>& names) {
  ordered_json j = names;
  return j.dump(1) + "\n";
}

// Horizontal PFI bars around a zero axis, in input order.
Screenshot pfi_plot(const std::vector<ml::PfiResult>& rows) {
  const int bar = 14, gap = 6, margin = 20, width = 640;
  const int height = std::max(1, static_cast<int>(rows.size())) * (bar + gap) + 2 * margin;
  Screenshot img(width, height);
  img.fill(255, 255, 255);
  double lo = 0.0, hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.mean_delta);
    hi = std::max(hi, r.mean_delta);
  }
  const double span = hi - lo > 0.0 ? hi - lo : 1.0;
  const int plot_w = width - 2 * margin;
  const int axis = margin + static_cast<int>(std::lround(-lo / span * plot_w));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int y0 = margin + static_cast<int>(i) * (bar + gap);
    const int len = static_cast<int>(std::lround(rows[i].mean_delta / span * plot_w));
    const int x0 = std::min(axis, axis + len);
    const int x1 = std::max(axis, axis + len);
    for (int y = y0; y < y0 + bar; ++y) {
      for (int x = x0; x < x1; ++x) {
        if (rows[i].mean_delta >= 0) {
          img.set(x, y, 46, 104, 176);
        } else {
          img.set(x, y, 200, 70, 60);
        }
      }
    }
  }
  for (int y = margin / 2; y < height - margin / 2; ++y) img.set(axis, y, 0, 0, 0);
  return img;
}

ml::Dataset load_dataset(const std::string& features_path, const std::string& labels_path) {
  const auto table = read_csv(require_file(features_path), 2);
  const auto labels = read_labels_csv(require_file(labels_path));
  return ml::join_dataset(table, labels);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Visual-complexity features and knowledge-gain experiments", "viscom"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  std::size_t workers = 0;
  std::string out_dir = ".";
  std::string config_path;
  std::string facts_path;
  std::string provider_url;
  std::optional<std::uint64_t> seed;
  int pdoc = 6;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--workers", workers, "Worker threads (0 = logical cores)");
    sub->add_option("--out-dir", out_dir, "Output directory");
  };

  std::string snapshot_root;
  auto* extract = app.add_subcommand("extract", "Per-page features for a snapshot corpus");
  extract->add_option("snapshot_root", snapshot_root)->required();
  extract->add_option("--facts", facts_path, "facts.json for relevance features");
  extract->add_option("--provider-url", provider_url, "Remote embedding service base URL");
  extract->add_option("--pdoc", pdoc, "Permitted degree of coherence (1-10)");
  extract->add_option("--config", config_path, "VIPS rule table JSON");
  add_common(extract);

  std::string sessions_path, pages_path;
  auto* aggregate = app.add_subcommand("aggregate", "Session features and knowledge-gain labels");
  aggregate->add_option("sessions", sessions_path, "sessions.jsonl")->required();
  aggregate->add_option("pages", pages_path, "features_pages.csv")->required();
  add_common(aggregate);

  std::string features_path, labels_path;
  auto* experiment = app.add_subcommand("experiment", "Cross-validated classification experiment");
  experiment->add_option("features", features_path, "features.csv")->required();
  experiment->add_option("labels", labels_path, "labels.csv")->required();
  experiment->add_option("--config", config_path, "experiment.json")->required();
  experiment->add_option("--seed", seed, "Master seed (overrides the config)");
  add_common(experiment);

  auto* importance = app.add_subcommand("importance", "Permutation feature importance");
  importance->add_option("features", features_path, "features.csv")->required();
  importance->add_option("labels", labels_path, "labels.csv")->required();
  importance->add_option("--config", config_path, "experiment.json")->required();
  importance->add_option("--seed", seed, "Master seed (overrides the config)");
  add_common(importance);

  std::string report_path, pfi_path, report_dir;
  auto* report = app.add_subcommand("report", "Render report.json as a table");
  report->add_option("report", report_path, "report.json")->required();
  report->add_option("--pfi", pfi_path, "pfi.csv to plot as pfi.png");
  report->add_option("--out-dir", report_dir, "Write report.txt (and pfi.png) here");

  auto* reg = app.add_subcommand("registry", "Write the feature registries");
  reg->add_option("--facts", facts_path, "facts.json (sets the relevance feature count)");
  add_common(reg);

  SynthOptions synth_opts;
  bool synth_null = false;
  auto* synth = app.add_subcommand("synth", "Synthetic session features and labels");
  synth->add_option("--sessions", synth_opts.n_sessions, "Number of sessions");
  synth->add_option("--noise", synth_opts.n_noise, "Number of noise features");
  synth->add_option("--kg-noise", synth_opts.kg_noise, "SD of the knowledge-gain noise");
  synth->add_flag("--null", synth_null, "No planted feature");
  synth->add_flag("--constant", synth_opts.constant_feature, "Add a constant feature");
  synth->add_option("--seed", seed, "Seed");
  add_common(synth);

  std::string bundle_dir;
  auto* vips = app.add_subcommand("vips", "Print the VIPS block tree of one bundle");
  vips->add_option("bundle", bundle_dir)->required();
  vips->add_option("--pdoc", pdoc, "Permitted degree of coherence (1-10)");
  vips->add_option("--config", config_path, "VIPS rule table JSON");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUser;
  }

  try {
    if (*extract) {
      if (!fs::is_directory(snapshot_root)) throw UserError("not a directory: " + snapshot_root);
      const auto bundles = list_bundles(snapshot_root);
      if (bundles.empty()) throw UserError("no snapshot bundles under " + snapshot_root);
      ExtractOptions opts;
      opts.pdoc = pdoc;
      if (!facts_path.empty()) opts.facts = parse_facts_json(require_file(facts_path));
      if (!config_path.empty()) opts.vips = VipsConfig::from_json(require_file(config_path));
      std::unique_ptr<EmbeddingProvider> provider;
      if (provider_url.empty()) {
        provider = std::make_unique<HashedBagProvider>();
      } else {
        provider = std::make_unique<RemoteEmbeddingProvider>(provider_url);
      }
      ensure_dir(out_dir);
      Manifest m("extract", out_dir);
      m.input(snapshot_root);
      if (!facts_path.empty()) m.input(facts_path);
      if (!config_path.empty()) m.config(config_path);
      const auto result = extract_corpus(snapshot_root, *provider, opts, workers);
      for (const auto& e : result.errors) err << "extract: " << e << "\n";
      m.output("features_pages.csv", write_csv(result.table));
      m.finish();
      out << result.table.rows.size() << " pages, " << result.succeeded << " extracted, "
          << result.table.names.size() << " features\n";
      return result.succeeded > 0 ? kExitOk : kExitInternal;
    }
    if (*aggregate) {
      const auto sessions = parse_sessions_jsonl(require_file(sessions_path));
      const auto pages = read_csv(require_file(pages_path), 1);
      ensure_dir(out_dir);
      Manifest m("aggregate", out_dir);
      m.input(sessions_path);
      m.input(pages_path);
      const auto result = aggregate_corpus(sessions, pages);
      m.output("features.csv", write_csv(result.sessions));
      m.output("labels.csv", write_labels_csv(result.labels));
      m.finish();
      out << result.sessions.rows.size() << " sessions, " << result.sessions.names.size()
          << " features\n";
      return kExitOk;
    }
    if (*experiment || *importance) {
      auto config = ml::ExperimentConfig::from_json(require_file(config_path));
      if (seed) config.seed = *seed;
      const auto data = load_dataset(features_path, labels_path);
      ensure_dir(out_dir);
      Manifest m(*experiment ? "experiment" : "importance", out_dir);
      m.config(config_path);
      m.input(features_path);
      m.input(labels_path);
      m.seed(config.seed);
      if (*experiment) {
        const auto rep = ml::run_experiment(data, config, workers);
        m.output("report.json", ml::report_json_text(rep));
        m.output("report.csv", ml::report_to_csv(rep));
        m.finish();
        out << ml::render_report(nlohmann::json::parse(ml::report_json_text(rep)));
      } else {
        const auto rows = ml::run_importance(data, config, workers);
        m.output("pfi.csv", ml::pfi_to_csv(rows));
        m.finish();
        out << rows.size() << " features ranked\n";
      }
      return kExitOk;
    }
    if (*report) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(require_file(report_path));
      } catch (const nlohmann::json::exception& e) {
        throw UserError(std::string("report.json is not valid JSON: ") + e.what());
      }
      const std::string table = ml::render_report(doc);
      out << table;
      std::vector<ml::PfiResult> pfi_rows;
      if (!pfi_path.empty()) pfi_rows = ml::pfi_from_csv(require_file(pfi_path));
      if (!report_dir.empty()) {
        ensure_dir(report_dir);
        Manifest m("report", report_dir);
        m.input(report_path);
        m.output("report.txt", table);
        if (!pfi_path.empty()) {
          m.input(pfi_path);
          m.output_binary("pfi.png", encode_png(pfi_plot(pfi_rows)));
        }
        m.finish();
      } else if (!pfi_path.empty()) {
        throw UserError("--pfi needs --out-dir for the plot");
      }
      return kExitOk;
    }
    if (*reg) {
      std::size_t n_facts = registry::kDefaultFactCount;
      if (!facts_path.empty()) n_facts = parse_facts_json(require_file(facts_path)).facts.size();
      ensure_dir(out_dir);
      Manifest m("registry", out_dir);
      if (!facts_path.empty()) m.input(facts_path);
      m.output("features_html.json", registry_json(registry::html()));
      m.output("features_visual.json", registry_json(registry::visual()));
      m.output("features_layout.json", registry_json(registry::layout()));
      m.output("features_aesthetics.json", registry_json(registry::aesthetics()));
      m.output("features_texcom.json", registry_json(registry::texcom()));
      m.output("features_webrel.json", registry_json(registry::webrel(n_facts)));
      m.output("features_query.json", registry_json(registry::query()));
      m.finish();
      out << "html " << registry::html().size() << ", visual " << registry::visual().size()
          << ", layout " << registry::layout().size() << ", aesthetics "
          << registry::aesthetics().size() << ", viscom " << registry::viscom().size()
          << ", texcom " << registry::texcom().size() << ", webrel " << n_facts << ", query "
          << registry::query().size() << "\n";
      return kExitOk;
    }
    if (*synth) {
      if (seed) synth_opts.seed = *seed;
      synth_opts.planted = !synth_null;
      ensure_dir(out_dir);
      Manifest m("synth", out_dir);
      m.seed(synth_opts.seed);
      const auto data = generate_synthetic(synth_opts);
      m.output("features.csv", write_csv(data.features));
      m.output("labels.csv", write_labels_csv(data.labels));
      m.finish();
      out << data.labels.size() << " synthetic sessions\n";
      return kExitOk;
    }
    if (*vips) {
      VipsConfig cfg;
      if (!config_path.empty()) cfg = VipsConfig::from_json(require_file(config_path));
      if (!fs::is_directory(bundle_dir)) throw UserError("not a directory: " + bundle_dir);
      const auto page = load_snapshot(bundle_dir);
      out << vips_tree_to_json(segment_vips(page.geometry, pdoc, cfg));
      return kExitOk;
    }
  } catch (const UserError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUser;
  } catch (const SnapshotError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUser;
  } catch (const ml::ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUser;
  } catch (const MissingSnapshot& e) {
    err << "error: " << e.what() << "\n";
    return kExitUser;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUser;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kExitUser;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace viscom::cli
