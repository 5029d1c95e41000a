#pragma once

#include <string>
#include <vector>

#include "viscom/features.hpp"
#include "viscom/relevance.hpp"
#include "viscom/session.hpp"
#include "viscom/snapshot.hpp"
#include "viscom/vips.hpp"

namespace viscom {

struct ExtractOptions {
  int pdoc = 6;
  VipsConfig vips;
  FactSet facts = default_facts();
};

// VisCom (114) + TexCom (32) + WebRel (|facts|) for one page, in registry order.
FeatureVector extract_page_features(const PageSnapshot& page, const EmbeddingProvider& provider,
                                    const ExtractOptions& options = ExtractOptions{});

struct ExtractResult {
  FeatureTable table;               // key snapshot_id, rows sorted by id
  std::vector<std::string> errors;  // one message per failed bundle
  std::size_t succeeded = 0;
};

// Sub-directories of `root`, sorted by name.
std::vector<std::string> list_bundles(const std::string& root);

// Every bundle under `root`; failures produce all-missing rows.
ExtractResult extract_corpus(const std::string& root, const EmbeddingProvider& provider,
                             const ExtractOptions& options, std::size_t workers);

class MissingSnapshot : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AggregateResult {
  FeatureTable sessions;  // keys user_id, scope
  std::vector<LabelRow> labels;
};

// Content pages of each session are looked up in `pages` (key snapshot_id)
// and averaged; query features are appended. Throws MissingSnapshot when a
// content event has no snapshot_id or references an unknown snapshot.
AggregateResult aggregate_corpus(const std::vector<SessionRecord>& sessions,
                                 const FeatureTable& pages);

}  // namespace viscom
