#include "viscom/dom_stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace viscom {

namespace {

const std::vector<GroupStat> kAll = {GroupStat::kCount, GroupStat::kMin,
                                     GroupStat::kMax, GroupStat::kAvg,
                                     GroupStat::kStd};
const std::vector<GroupStat> kCountOnly = {GroupStat::kCount};

const char* suffix(GroupStat s) {
  switch (s) {
    case GroupStat::kCount:
      return "_count";
    case GroupStat::kMin:
      return "_min";
    case GroupStat::kMax:
      return "_max";
    case GroupStat::kAvg:
      return "_avg";
    case GroupStat::kStd:
      return "_std";
  }
  return "";
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\f' || c == '\r';
  });
}

std::size_t non_space_code_points(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) == 0x80) continue;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\f' || c == '\r') continue;
    ++n;
  }
  return n;
}

struct Tally {
  std::map<std::string, std::size_t> per_tag;
  std::size_t elements = 0;
  std::size_t max_depth = 0;
  std::size_t text_nodes = 0;
  std::size_t text_length = 0;
};

void walk(const DomNode& n, std::size_t depth, bool in_raw, Tally& t) {
  if (n.is_text()) {
    if (in_raw || is_blank(n.text)) return;
    ++t.text_nodes;
    t.text_length += non_space_code_points(n.text);
    return;
  }
  ++t.elements;
  ++t.per_tag[n.tag];
  t.max_depth = std::max(t.max_depth, depth);
  const bool raw = in_raw || n.tag == "script" || n.tag == "style";
  for (const DomNode& c : n.children) walk(c, depth + 1, raw, t);
}

std::size_t group_total(const Tally& t, const TagGroupSpec& g) {
  std::size_t total = 0;
  for (const std::string& tag : g.member_tags) {
    if (auto it = t.per_tag.find(tag); it != t.per_tag.end()) total += it->second;
  }
  return total;
}

}  // namespace

const std::vector<TagGroupSpec>& default_tag_groups() {
  static const std::vector<TagGroupSpec> groups = {
      {"headings", {"h1", "h2", "h3", "h4", "h5", "h6"}, kAll},
      {"paragraphs", {"p"}, kCountOnly},
      {"lists", {"ul", "ol", "li"}, kAll},
      {"tables", {"table", "tr", "td", "th"}, kAll},
      {"images", {"img", "picture", "svg"}, kCountOnly},
      {"media", {"video", "audio", "iframe", "embed"}, kCountOnly},
      {"links", {"a"}, kAll},
      {"forms", {"form", "input", "button", "select", "textarea"}, kCountOnly},
      {"styling", {"b", "i", "em", "strong", "span"}, kCountOnly},
  };
  return groups;
}

void check_tag_groups(const std::vector<TagGroupSpec>& groups) {
  std::set<std::string> seen;
  for (const TagGroupSpec& g : groups) {
    if (g.member_tags.empty()) {
      throw std::invalid_argument("tag group has no members: " + g.group_name);
    }
    if (g.stats.empty() || g.stats.front() != GroupStat::kCount) {
      throw std::invalid_argument("tag group must start with a count: " + g.group_name);
    }
    for (const std::string& tag : g.member_tags) {
      if (!seen.insert(tag).second) {
        throw std::invalid_argument("tag appears in two groups: " + tag);
      }
    }
  }
}

std::vector<std::string> html_feature_names(const std::vector<TagGroupSpec>& groups) {
  std::vector<std::string> names;
  for (const TagGroupSpec& g : groups) {
    for (GroupStat s : g.stats) names.push_back("viscom.html." + g.group_name + suffix(s));
  }
  for (const char* global : {"total_tags", "max_depth", "distinct_tags", "text_nodes",
                             "text_length", "script_style_count"}) {
    names.push_back(std::string("viscom.html.") + global);
  }
  return names;
}

FeatureVector html_features(const DomNode& document,
                            const std::vector<TagGroupSpec>& groups) {
  check_tag_groups(groups);
  const DomNode& body = body_of(document);

  Tally whole;
  std::vector<Tally> sections;
  for (const DomNode& c : body.children) {
    walk(c, 1, false, whole);
    if (c.is_element()) {
      Tally s;
      walk(c, 1, false, s);
      sections.push_back(std::move(s));
    }
  }

  std::vector<double> values;
  for (const TagGroupSpec& g : groups) {
    std::vector<double> per_section;
    per_section.reserve(sections.size());
    for (const Tally& s : sections) {
      per_section.push_back(static_cast<double>(group_total(s, g)));
    }
    double mean = 0.0;
    double sd = 0.0;
    if (!per_section.empty()) {
      for (double v : per_section) mean += v;
      mean /= static_cast<double>(per_section.size());
      for (double v : per_section) sd += (v - mean) * (v - mean);
      sd = std::sqrt(sd / static_cast<double>(per_section.size()));
    }
    for (GroupStat s : g.stats) {
      switch (s) {
        case GroupStat::kCount:
          values.push_back(static_cast<double>(group_total(whole, g)));
          break;
        case GroupStat::kMin:
          values.push_back(per_section.empty()
                               ? 0.0
                               : *std::min_element(per_section.begin(), per_section.end()));
          break;
        case GroupStat::kMax:
          values.push_back(per_section.empty()
                               ? 0.0
                               : *std::max_element(per_section.begin(), per_section.end()));
          break;
        case GroupStat::kAvg:
          values.push_back(mean);
          break;
        case GroupStat::kStd:
          values.push_back(sd);
          break;
      }
    }
  }

  std::size_t script_style = 0;
  for (const char* tag : {"script", "style"}) {
    if (auto it = whole.per_tag.find(tag); it != whole.per_tag.end()) script_style += it->second;
  }
  values.push_back(static_cast<double>(whole.elements));
  values.push_back(static_cast<double>(whole.max_depth));
  values.push_back(static_cast<double>(whole.per_tag.size()));
  values.push_back(static_cast<double>(whole.text_nodes));
  values.push_back(static_cast<double>(whole.text_length));
  values.push_back(static_cast<double>(script_style));
  return FeatureVector(html_feature_names(groups), std::move(values));
}

}  // namespace viscom
