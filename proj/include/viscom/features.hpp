#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace viscom {

enum class FeatureScope { kPage, kSession };

// Named, ordered feature values. std::nullopt is the missing marker and is
// never conflated with 0.
struct FeatureVector {
  std::vector<std::string> names;
  std::vector<std::optional<double>> values;
  FeatureScope scope = FeatureScope::kPage;

  FeatureVector() = default;
  FeatureVector(std::vector<std::string> n, std::vector<double> v,
                FeatureScope s = FeatureScope::kPage);
  FeatureVector(std::vector<std::string> n, std::vector<std::optional<double>> v,
                FeatureScope s = FeatureScope::kPage);

  std::size_t size() const { return names.size(); }
  // Throws std::out_of_range for unknown names.
  std::optional<double> at(const std::string& name) const;
  // Value of a present feature; throws std::logic_error when missing.
  double value(const std::string& name) const;

  // All-missing vector over `names`.
  static FeatureVector missing(std::vector<std::string> names,
                               FeatureScope s = FeatureScope::kPage);
  // Concatenation; names must stay unique.
  static FeatureVector concat(const std::vector<FeatureVector>& parts);

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Ordered feature names per family. Prefixes are part of the contract: the
// experiment config addresses feature sets by these prefixes.
namespace registry {

inline constexpr std::size_t kHtmlCount = 31;
inline constexpr std::size_t kVisualCount = 8;
inline constexpr std::size_t kLayoutCount = 5;
inline constexpr std::size_t kAestheticsCount = 70;
inline constexpr std::size_t kVisComCount =
    kHtmlCount + kVisualCount + kLayoutCount + kAestheticsCount;
inline constexpr std::size_t kTexComCount = 32;
inline constexpr std::size_t kQueryCount = 11;
inline constexpr std::size_t kDefaultFactCount = 10;

const std::vector<std::string>& html();
const std::vector<std::string>& visual();
const std::vector<std::string>& layout();
const std::vector<std::string>& aesthetics();
const std::vector<std::string>& texcom();
const std::vector<std::string>& query();
std::vector<std::string> webrel(std::size_t n_facts);

// html + visual + layout + aesthetics.
std::vector<std::string> viscom();
// viscom + texcom + webrel: the per-page extraction row.
std::vector<std::string> page(std::size_t n_facts);
// page + query: the per-session row.
std::vector<std::string> session(std::size_t n_facts);

// True when `name` equals `prefix` or belongs to the family it addresses
// ("viscom" matches "viscom.html.x"; "viscom.html" does not match "viscom.htmlx").
bool has_prefix(const std::string& name, const std::string& prefix);

}  // namespace registry

}  // namespace viscom
