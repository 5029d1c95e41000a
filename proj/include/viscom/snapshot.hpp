#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "viscom/image.hpp"
#include "viscom/rect.hpp"

namespace viscom {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingFile : public SnapshotError {
 public:
  explicit MissingFile(std::string file)
      : SnapshotError("missing file: " + file), file_(std::move(file)) {}
  const std::string& file() const { return file_; }

 private:
  std::string file_;
};

class SchemaViolation : public SnapshotError {
 public:
  SchemaViolation(std::string field, std::string rule)
      : SnapshotError("schema violation: " + field + ": " + rule),
        field_(std::move(field)),
        rule_(std::move(rule)) {}
  const std::string& field() const { return field_; }
  const std::string& rule() const { return rule_; }

 private:
  std::string field_;
  std::string rule_;
};

class DimensionMismatch : public SnapshotError {
 public:
  using SnapshotError::SnapshotError;
};

enum class PageType { kSerp, kVideo, kContent };

std::string to_string(PageType type);
// Throws std::invalid_argument for names other than serp/video/content.
PageType parse_page_type(const std::string& name);

using StringMap = std::map<std::string, std::string>;

struct RenderNode {
  int id = 0;
  std::optional<int> parent_id;
  std::string tag;
  Rect box;
  bool visible = true;
  StringMap styles;
  std::string text;
  StringMap attrs;

  bool is_text() const { return tag == "#text"; }
  std::string style(const std::string& key) const;
  std::string attr(const std::string& key) const;

  friend bool operator==(const RenderNode&, const RenderNode&) = default;
};

struct RenderGeometry {
  int page_width = 0;
  int page_height = 0;
  std::vector<RenderNode> nodes;

  Rect page_box() const {
    return Rect{0.0, 0.0, static_cast<double>(page_width),
                static_cast<double>(page_height)};
  }

  friend bool operator==(const RenderGeometry&, const RenderGeometry&) = default;
};

struct PageMeta {
  std::string url;
  std::string captured_at;  // ISO-8601, kept verbatim
  std::optional<PageType> page_type_hint;

  friend bool operator==(const PageMeta&, const PageMeta&) = default;
};

struct PageSnapshot {
  std::string id;
  std::string html;
  Screenshot screenshot;
  RenderGeometry geometry;
  PageMeta meta;

  friend bool operator==(const PageSnapshot&, const PageSnapshot&) = default;
};

// Violations name the node id and rule; empty when the geometry is a valid tree.
std::vector<std::string> validate_geometry(const RenderGeometry& g);

RenderGeometry parse_geometry_json(const std::string& text);
std::string geometry_to_json(const RenderGeometry& g);
PageMeta parse_meta_json(const std::string& text);
std::string meta_to_json(const PageMeta& meta);

// Reads page.html, screenshot.png, geometry.json and meta.json. The snapshot
// id is the directory name.
PageSnapshot load_snapshot(const std::string& bundle_dir);
void write_snapshot(const PageSnapshot& snapshot, const std::string& bundle_dir);

// Host/path patterns used when no explicit page-type hint is available.
struct PageTypeRules {
  struct SerpRule {
    std::string host_suffix;  // matched against the host or its parent domains
    std::string path_prefix;  // empty matches any path
  };
  std::vector<SerpRule> serp;
  std::vector<std::string> video_hosts;

  static PageTypeRules defaults();
  static PageTypeRules from_json(const std::string& text);
  std::string to_json() const;
};

PageType classify_page_type(const std::string& url,
                            std::optional<PageType> hint,
                            const PageTypeRules& rules = PageTypeRules::defaults());

struct NavigationEvent {
  double timestamp = 0.0;
  std::string url;
  std::optional<std::string> snapshot_id;
  std::optional<std::string> query;
  PageType page_type = PageType::kContent;

  friend bool operator==(const NavigationEvent&, const NavigationEvent&) = default;
};

struct KnowledgeTest {
  int pre_correct = 0;
  int post_correct = 0;
  int n_items = 0;

  friend bool operator==(const KnowledgeTest&, const KnowledgeTest&) = default;
};

struct SessionRecord {
  std::string user_id;
  std::vector<NavigationEvent> events;
  KnowledgeTest test;

  friend bool operator==(const SessionRecord&, const SessionRecord&) = default;
};

// One SessionRecord per JSON line. Events without "page_type" are classified
// with `rules`. Throws SchemaViolation with a "line N" field on bad input.
std::vector<SessionRecord> parse_sessions_jsonl(
    const std::string& text,
    const PageTypeRules& rules = PageTypeRules::defaults());
std::string session_to_json_line(const SessionRecord& session);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace viscom
