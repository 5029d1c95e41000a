#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "viscom/features.hpp"
#include "viscom/snapshot.hpp"

namespace viscom {

class DegenerateDistribution : public std::invalid_argument {
 public:
  DegenerateDistribution() : std::invalid_argument("knowledge gain has zero variance") {}
};

enum class KgClass { kLow, kModerate, kHigh };

std::string to_string(KgClass c);
KgClass parse_kg_class(const std::string& s);

struct KgLabel {
  double kg = 0.0;
  double z = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  KgClass cls = KgClass::kModerate;
};

// Content events in order (serp and video pages dropped).
std::vector<NavigationEvent> filter_content_pages(const SessionRecord& s);

// Per-feature mean over `pages` ignoring missing values; a feature missing
// on every page (or no pages at all) stays missing. `page_names` fixes the
// page registry; `query_f` is appended unchanged. Result has session scope.
FeatureVector aggregate_session(const std::vector<FeatureVector>& pages,
                                const FeatureVector& query_f,
                                const std::vector<std::string>& page_names);

// (post - pre) / n_items.
double compute_kg(const KnowledgeTest& t);

// z-scores with population mean and sd; z < -0.5 low, z > 0.5 high, else
// moderate. Needs at least 2 values; DegenerateDistribution when sd is 0.
std::vector<KgLabel> label_classes(const std::vector<double>& kgs);

// Rows of keyed feature values as written to features_pages.csv and
// features.csv. Missing values are empty cells.
struct FeatureTable {
  std::vector<std::string> key_columns;
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> keys;
  std::vector<std::vector<std::optional<double>>> rows;

  void add(std::vector<std::string> key, const FeatureVector& v);
  std::size_t column(const std::string& name) const;  // throws std::out_of_range
};

// Shortest round-trip decimal form.
std::string format_number(double v);

std::string write_csv(const FeatureTable& t);
// `key_count` leading columns are keys. Throws std::invalid_argument on
// ragged rows or unparsable numbers.
FeatureTable read_csv(const std::string& text, std::size_t key_count);

struct LabelRow {
  std::string user_id;
  KgLabel label;
};

std::string write_labels_csv(const std::vector<LabelRow>& rows);
std::vector<LabelRow> read_labels_csv(const std::string& text);

// Splits CSV text into records honoring double-quoted fields.
std::vector<std::vector<std::string>> parse_csv_records(const std::string& text);
std::string csv_field(const std::string& s);

}  // namespace viscom
