#include "viscom/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <map>

#include "viscom/aesthetics.hpp"
#include "viscom/dom.hpp"
#include "viscom/dom_stats.hpp"
#include "viscom/ml/parallel.hpp"
#include "viscom/query.hpp"
#include "viscom/text.hpp"
#include "viscom/visual.hpp"

namespace viscom {

namespace fs = std::filesystem;

FeatureVector extract_page_features(const PageSnapshot& page, const EmbeddingProvider& provider,
                                    const ExtractOptions& options) {
  const DomNode dom = parse_dom(page.html);
  const VipsTree tree = segment_vips(page.geometry, options.pdoc, options.vips);
  const MainText text = extract_main_text(dom);
  return FeatureVector::concat({
      html_features(dom),
      visual_features(page.screenshot),
      layout_features(tree, page.geometry),
      aesthetics_features(tree, page.geometry),
      texcom_features(text),
      relevance_features(text, options.facts, provider),
  });
}

std::vector<std::string> list_bundles(const std::string& root) {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExtractResult extract_corpus(const std::string& root, const EmbeddingProvider& provider,
                             const ExtractOptions& options, std::size_t workers) {
  const auto bundles = list_bundles(root);
  const auto names = registry::page(options.facts.facts.size());
  std::vector<FeatureVector> rows(bundles.size());
  std::vector<std::string> errors(bundles.size());
  ml::parallel_for(bundles.size(), workers, [&](std::size_t i) {
    try {
      rows[i] = extract_page_features(load_snapshot(bundles[i]), provider, options);
    } catch (const std::exception& e) {
      rows[i] = FeatureVector::missing(names);
      errors[i] = fs::path(bundles[i]).filename().string() + ": " + e.what();
    }
  });
  ExtractResult out;
  out.table.key_columns = {"snapshot_id"};
  out.table.names = names;
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    out.table.add({fs::path(bundles[i]).filename().string()}, rows[i]);
    if (errors[i].empty()) {
      ++out.succeeded;
    } else {
      out.errors.push_back(errors[i]);
    }
  }
  return out;
}

AggregateResult aggregate_corpus(const std::vector<SessionRecord>& sessions,
                                 const FeatureTable& pages) {
  std::map<std::string, std::size_t> by_id;
  for (std::size_t r = 0; r < pages.rows.size(); ++r) by_id[pages.keys[r].front()] = r;

  AggregateResult out;
  out.sessions.key_columns = {"user_id", "scope"};
  std::vector<double> kgs;
  for (const SessionRecord& s : sessions) {
    std::vector<FeatureVector> visited;
    for (const NavigationEvent& e : filter_content_pages(s)) {
      if (!e.snapshot_id) {
        throw MissingSnapshot("session " + s.user_id + ": content event at t=" +
                              std::to_string(e.timestamp) + " has no snapshot_id");
      }
      auto it = by_id.find(*e.snapshot_id);
      if (it == by_id.end()) {
        throw MissingSnapshot("session " + s.user_id + ": unknown snapshot " + *e.snapshot_id);
      }
      visited.emplace_back(pages.names, pages.rows[it->second]);
    }
    out.sessions.add({s.user_id, "session"},
                     aggregate_session(visited, query_features(s), pages.names));
    kgs.push_back(compute_kg(s.test));
  }
  const auto labels = label_classes(kgs);
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    out.labels.push_back({sessions[i].user_id, labels[i]});
  }
  return out;
}

}  // namespace viscom
