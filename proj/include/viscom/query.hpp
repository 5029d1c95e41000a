#pragma once

#include <string_view>
#include <vector>

#include "viscom/features.hpp"
#include "viscom/snapshot.hpp"

namespace viscom {

// Lowercased whitespace tokens of a query.
std::vector<std::string> query_tokens(std::string_view query);

// The 11 query-behaviour features in registry order. Duration spans the
// first to the last event in minutes; length and overlap features are 0
// without queries, and queries_per_minute is 0 for a zero-length session.
FeatureVector query_features(const SessionRecord& s);

}  // namespace viscom
