#pragma once

#include <set>
#include <string>
#include <vector>

#include "viscom/dom.hpp"
#include "viscom/features.hpp"

namespace viscom {

enum class GroupStat { kCount, kMin, kMax, kAvg, kStd };

struct TagGroupSpec {
  std::string group_name;
  std::set<std::string> member_tags;
  std::vector<GroupStat> stats;  // always starts with kCount
};

// headings, paragraphs, lists, tables, images, media, links, forms, styling.
const std::vector<TagGroupSpec>& default_tag_groups();

// Throws std::invalid_argument when a group is empty or groups overlap.
void check_tag_groups(const std::vector<TagGroupSpec>& groups);

// Feature names produced by html_features() for `groups`.
std::vector<std::string> html_feature_names(const std::vector<TagGroupSpec>& groups);

// Statistics over the <body> subtree (body itself excluded):
//   per group: total member count, plus the requested min/max/avg/std of the
//   member count per top-level section (each element child of body);
//   globals: element count, max element depth below body, distinct element
//   names, non-blank text nodes, non-whitespace text length in code points,
//   and script/style elements.
// Text inside script/style never counts as page text.
FeatureVector html_features(const DomNode& document,
                            const std::vector<TagGroupSpec>& groups = default_tag_groups());

}  // namespace viscom
