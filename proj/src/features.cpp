#include "viscom/features.hpp"

#include <cstdio>
#include <set>

namespace viscom {

FeatureVector::FeatureVector(std::vector<std::string> n, std::vector<double> v,
                             FeatureScope s)
    : names(std::move(n)), values(v.begin(), v.end()), scope(s) {
  if (names.size() != values.size()) {
    throw std::invalid_argument("feature names and values differ in length");
  }
}

FeatureVector::FeatureVector(std::vector<std::string> n,
                             std::vector<std::optional<double>> v, FeatureScope s)
    : names(std::move(n)), values(std::move(v)), scope(s) {
  if (names.size() != values.size()) {
    throw std::invalid_argument("feature names and values differ in length");
  }
}

std::optional<double> FeatureVector::at(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  throw std::out_of_range("unknown feature: " + name);
}

double FeatureVector::value(const std::string& name) const {
  const auto v = at(name);
  if (!v) throw std::logic_error("feature is missing: " + name);
  return *v;
}

FeatureVector FeatureVector::missing(std::vector<std::string> names, FeatureScope s) {
  std::vector<std::optional<double>> values(names.size());
  return FeatureVector(std::move(names), std::move(values), s);
}

FeatureVector FeatureVector::concat(const std::vector<FeatureVector>& parts) {
  FeatureVector out;
  std::set<std::string> seen;
  for (const FeatureVector& p : parts) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!seen.insert(p.names[i]).second) {
        throw std::invalid_argument("duplicate feature name: " + p.names[i]);
      }
      out.names.push_back(p.names[i]);
      out.values.push_back(p.values[i]);
    }
    out.scope = p.scope;
  }
  return out;
}

namespace registry {

namespace {

std::vector<std::string> prefixed(const std::string& prefix,
                                  std::initializer_list<const char*> names) {
  std::vector<std::string> out;
  for (const char* n : names) out.push_back(prefix + n);
  return out;
}

}  // namespace

const std::vector<std::string>& html() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    const std::string p = "viscom.html.";
    // Groups with per-section distribution statistics get min/max/avg/std.
    const std::pair<const char*, bool> groups[] = {
        {"headings", true}, {"paragraphs", false}, {"lists", true},
        {"tables", true},   {"images", false},     {"media", false},
        {"links", true},    {"forms", false},      {"styling", false}};
    for (const auto& [g, stats] : groups) {
      out.push_back(p + g + "_count");
      if (!stats) continue;
      for (const char* s : {"_min", "_max", "_avg", "_std"}) out.push_back(p + g + s);
    }
    for (const char* g : {"total_tags", "max_depth", "distinct_tags", "text_nodes",
                          "text_length", "script_style_count"}) {
      out.push_back(p + g);
    }
    return out;
  }();
  return names;
}

const std::vector<std::string>& visual() {
  static const std::vector<std::string> names =
      prefixed("viscom.visual.", {"avg_brightness", "avg_hue", "avg_colorfulness",
                                  "png_size", "jpg_size", "page_width", "page_height",
                                  "aspect_ratio"});
  return names;
}

const std::vector<std::string>& layout() {
  static const std::vector<std::string> names =
      prefixed("viscom.layout.", {"n_vips_non_leaf_nodes", "n_vips_leaf_nodes",
                                  "text_area_to_whole_page", "n_texts_to_whole_page",
                                  "n_vips_layers"});
  return names;
}

const std::vector<std::string>& aesthetics() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const char* cls : {"all", "text", "image", "form", "other"}) {
      for (const char* m :
           {"balance", "equilibrium", "symmetry", "sequence", "cohesion", "unity",
            "proportion", "simplicity", "density", "regularity", "economy",
            "homogeneity", "rhythm", "order_and_complexity"}) {
        out.push_back(std::string("viscom.aesthetics.") + cls + "." + m);
      }
    }
    return out;
  }();
  return names;
}

const std::vector<std::string>& texcom() {
  static const std::vector<std::string> names = prefixed(
      "texcom.",
      {"flesch_reading_ease", "flesch_kincaid_grade", "ari", "coleman_liau",
       "gunning_fog", "lix", "smog",
       "characters", "syllables", "words", "sentences", "paragraphs",
       "avg_word_length", "words_per_sentence", "chars_per_sentence", "long_words",
       "complex_words", "type_token_ratio", "min_sentence_length",
       "max_sentence_length",
       "tobeverb", "auxverb", "conjunction", "pronoun", "preposition",
       "nominalization",
       "begin_pronoun", "begin_interrogative", "begin_article",
       "begin_subordination", "begin_conjunction", "begin_preposition"});
  return names;
}

const std::vector<std::string>& query() {
  static const std::vector<std::string> names = prefixed(
      "query.",
      {"n_queries", "avg_query_len_tokens", "max_query_len_tokens",
       "min_query_len_tokens", "avg_query_len_chars", "n_unique_query_terms",
       "mean_jaccard_consecutive_queries", "n_serp_visits", "n_content_pages",
       "session_duration_minutes", "queries_per_minute"});
  return names;
}

std::vector<std::string> webrel(std::size_t n_facts) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n_facts; ++i) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "webrel.fact_%02zu", i + 1);
    out.emplace_back(buf);
  }
  return out;
}

std::vector<std::string> viscom() {
  std::vector<std::string> out;
  for (const auto* part : {&html(), &visual(), &layout(), &aesthetics()}) {
    out.insert(out.end(), part->begin(), part->end());
  }
  return out;
}

std::vector<std::string> page(std::size_t n_facts) {
  std::vector<std::string> out = viscom();
  out.insert(out.end(), texcom().begin(), texcom().end());
  const auto rel = webrel(n_facts);
  out.insert(out.end(), rel.begin(), rel.end());
  return out;
}

std::vector<std::string> session(std::size_t n_facts) {
  std::vector<std::string> out = page(n_facts);
  out.insert(out.end(), query().begin(), query().end());
  return out;
}

bool has_prefix(const std::string& name, const std::string& prefix) {
  if (name == prefix) return true;
  return name.size() > prefix.size() && name.compare(0, prefix.size(), prefix) == 0 &&
         name[prefix.size()] == '.';
}

}  // namespace registry

}  // namespace viscom
