#include "viscom/query.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace viscom {

std::vector<std::string> query_tokens(std::string_view query) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : query) {
    if (std::isspace(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += static_cast<char>(std::tolower(c));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

FeatureVector query_features(const SessionRecord& s) {
  std::vector<std::vector<std::string>> queries;
  std::vector<double> chars;
  double serp = 0, content = 0;
  for (const NavigationEvent& e : s.events) {
    if (e.query) {
      queries.push_back(query_tokens(*e.query));
      chars.push_back(static_cast<double>(std::count_if(
          e.query->begin(), e.query->end(), [](char c) { return (c & 0xC0) != 0x80; })));
    }
    if (e.page_type == PageType::kSerp) ++serp;
    if (e.page_type == PageType::kContent) ++content;
  }

  double duration = 0.0;
  if (!s.events.empty()) {
    const auto [lo, hi] = std::minmax_element(
        s.events.begin(), s.events.end(),
        [](const NavigationEvent& a, const NavigationEvent& b) { return a.timestamp < b.timestamp; });
    duration = (hi->timestamp - lo->timestamp) / 60.0;
  }

  const double n = static_cast<double>(queries.size());
  double avg_tokens = 0, max_tokens = 0, min_tokens = 0, avg_chars = 0, jaccard = 0;
  std::set<std::string> terms;
  if (!queries.empty()) {
    min_tokens = static_cast<double>(queries.front().size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const double len = static_cast<double>(queries[i].size());
      avg_tokens += len;
      avg_chars += chars[i];
      max_tokens = std::max(max_tokens, len);
      min_tokens = std::min(min_tokens, len);
      terms.insert(queries[i].begin(), queries[i].end());
    }
    avg_tokens /= n;
    avg_chars /= n;
    for (std::size_t i = 1; i < queries.size(); ++i) {
      const std::set<std::string> a(queries[i - 1].begin(), queries[i - 1].end());
      const std::set<std::string> b(queries[i].begin(), queries[i].end());
      std::vector<std::string> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      const double uni = static_cast<double>(a.size() + b.size() - common.size());
      jaccard += uni > 0.0 ? static_cast<double>(common.size()) / uni : 0.0;
    }
    if (queries.size() > 1) jaccard /= n - 1.0;
  }
  const double qpm = duration > 0.0 ? n / duration : 0.0;
  return FeatureVector(registry::query(),
                       std::vector<double>{n, avg_tokens, max_tokens, min_tokens, avg_chars,
                                           static_cast<double>(terms.size()), jaccard, serp,
                                           content, duration, qpm},
                       FeatureScope::kSession);
}

}  // namespace viscom
