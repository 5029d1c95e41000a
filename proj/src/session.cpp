#include "viscom/session.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>

namespace viscom {

std::string to_string(KgClass c) {
  switch (c) {
    case KgClass::kLow:
      return "low";
    case KgClass::kModerate:
      return "moderate";
    case KgClass::kHigh:
      return "high";
  }
  return "moderate";
}

KgClass parse_kg_class(const std::string& s) {
  if (s == "low") return KgClass::kLow;
  if (s == "moderate") return KgClass::kModerate;
  if (s == "high") return KgClass::kHigh;
  throw std::invalid_argument("unknown class: " + s);
}

std::vector<NavigationEvent> filter_content_pages(const SessionRecord& s) {
  std::vector<NavigationEvent> out;
  for (const NavigationEvent& e : s.events) {
    if (e.page_type == PageType::kContent) out.push_back(e);
  }
  return out;
}

FeatureVector aggregate_session(const std::vector<FeatureVector>& pages,
                                const FeatureVector& query_f,
                                const std::vector<std::string>& page_names) {
  std::vector<double> sum(page_names.size(), 0.0);
  std::vector<std::size_t> count(page_names.size(), 0);
  for (const FeatureVector& p : pages) {
    if (p.names != page_names) {
      throw std::invalid_argument("page vectors must share one registry");
    }
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      if (p.values[i]) {
        sum[i] += *p.values[i];
        ++count[i];
      }
    }
  }
  std::vector<std::string> names = page_names;
  std::vector<std::optional<double>> values(page_names.size());
  for (std::size_t i = 0; i < page_names.size(); ++i) {
    if (count[i] > 0) values[i] = sum[i] / static_cast<double>(count[i]);
  }
  names.insert(names.end(), query_f.names.begin(), query_f.names.end());
  values.insert(values.end(), query_f.values.begin(), query_f.values.end());
  return FeatureVector(std::move(names), std::move(values), FeatureScope::kSession);
}

double compute_kg(const KnowledgeTest& t) {
  if (t.n_items <= 0) throw std::invalid_argument("n_items must be > 0");
  return static_cast<double>(t.post_correct - t.pre_correct) / t.n_items;
}

std::vector<KgLabel> label_classes(const std::vector<double>& kgs) {
  if (kgs.size() < 2) throw std::invalid_argument("need at least two knowledge gains");
  const auto [lo, hi] = std::minmax_element(kgs.begin(), kgs.end());
  if (*lo == *hi) throw DegenerateDistribution();
  double mu = 0.0;
  for (double k : kgs) mu += k;
  mu /= static_cast<double>(kgs.size());
  double var = 0.0;
  for (double k : kgs) var += (k - mu) * (k - mu);
  const double sigma = std::sqrt(var / static_cast<double>(kgs.size()));
  if (!(sigma > 0.0)) throw DegenerateDistribution();
  std::vector<KgLabel> out;
  out.reserve(kgs.size());
  for (double k : kgs) {
    KgLabel l;
    l.kg = k;
    l.mu = mu;
    l.sigma = sigma;
    l.z = (k - mu) / sigma;
    l.cls = l.z < -0.5 ? KgClass::kLow : (l.z > 0.5 ? KgClass::kHigh : KgClass::kModerate);
    out.push_back(l);
  }
  return out;
}

void FeatureTable::add(std::vector<std::string> key, const FeatureVector& v) {
  if (key.size() != key_columns.size()) throw std::invalid_argument("wrong key arity");
  if (names.empty() && rows.empty()) names = v.names;
  if (v.names != names) throw std::invalid_argument("row registry differs from table");
  keys.push_back(std::move(key));
  rows.push_back(v.values);
}

std::size_t FeatureTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw std::out_of_range("no feature column " + name);
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv_records(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        out.push_back(std::move(record));
      }
      record.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    out.push_back(std::move(record));
  }
  return out;
}

std::string write_csv(const FeatureTable& t) {
  std::string out;
  bool first = true;
  for (const auto* part : {&t.key_columns, &t.names}) {
    for (const std::string& c : *part) {
      if (!first) out += ',';
      out += csv_field(c);
      first = false;
    }
  }
  out += '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    first = true;
    for (const std::string& k : t.keys[r]) {
      if (!first) out += ',';
      out += csv_field(k);
      first = false;
    }
    for (const auto& v : t.rows[r]) {
      if (!first) out += ',';
      if (v) out += format_number(*v);
      first = false;
    }
    out += '\n';
  }
  return out;
}

namespace {

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a finite number: '" + s + "'");
  }
  return v;
}

}  // namespace

FeatureTable read_csv(const std::string& text, std::size_t key_count) {
  const auto records = parse_csv_records(text);
  if (records.empty()) throw std::invalid_argument("CSV has no header");
  const auto& header = records.front();
  if (header.size() < key_count) throw std::invalid_argument("CSV header too short");
  FeatureTable t;
  t.key_columns.assign(header.begin(), header.begin() + static_cast<long>(key_count));
  t.names.assign(header.begin() + static_cast<long>(key_count), header.end());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw std::invalid_argument("CSV row " + std::to_string(r + 1) + " has " +
                                  std::to_string(rec.size()) + " fields, expected " +
                                  std::to_string(header.size()));
    }
    t.keys.emplace_back(rec.begin(), rec.begin() + static_cast<long>(key_count));
    std::vector<std::optional<double>> row;
    row.reserve(t.names.size());
    for (std::size_t c = key_count; c < rec.size(); ++c) {
      if (rec[c].empty()) {
        row.emplace_back();
      } else {
        row.emplace_back(parse_number(rec[c]));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string write_labels_csv(const std::vector<LabelRow>& rows) {
  std::string out = "user_id,kg,z,class\n";
  for (const LabelRow& r : rows) {
    out += csv_field(r.user_id) + "," + format_number(r.label.kg) + "," +
           format_number(r.label.z) + "," + to_string(r.label.cls) + "\n";
  }
  return out;
}

std::vector<LabelRow> read_labels_csv(const std::string& text) {
  const auto records = parse_csv_records(text);
  if (records.empty() || records.front() != std::vector<std::string>{"user_id", "kg", "z", "class"}) {
    throw std::invalid_argument("labels.csv header must be user_id,kg,z,class");
  }
  std::vector<LabelRow> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != 4) throw std::invalid_argument("labels.csv row has wrong arity");
    LabelRow row;
    row.user_id = rec[0];
    row.label.kg = parse_number(rec[1]);
    row.label.z = parse_number(rec[2]);
    row.label.cls = parse_kg_class(rec[3]);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace viscom
