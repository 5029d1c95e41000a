#include "viscom/snapshot.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace viscom {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string to_string(PageType type) {
  switch (type) {
    case PageType::kSerp:
      return "serp";
    case PageType::kVideo:
      return "video";
    case PageType::kContent:
      return "content";
  }
  return "content";
}

PageType parse_page_type(const std::string& name) {
  if (name == "serp") return PageType::kSerp;
  if (name == "video") return PageType::kVideo;
  if (name == "content") return PageType::kContent;
  throw std::invalid_argument("unknown page type: " + name);
}

std::string RenderNode::style(const std::string& key) const {
  auto it = styles.find(key);
  return it == styles.end() ? std::string() : it->second;
}

std::string RenderNode::attr(const std::string& key) const {
  auto it = attrs.find(key);
  return it == attrs.end() ? std::string() : it->second;
}

std::vector<std::string> validate_geometry(const RenderGeometry& g) {
  std::vector<std::string> violations;
  if (g.page_width <= 0) violations.emplace_back("page width must be > 0");
  if (g.page_height <= 0) violations.emplace_back("page height must be > 0");

  std::unordered_map<int, std::size_t> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (!index.emplace(g.nodes[i].id, i).second) {
      violations.push_back("duplicate id: node " + std::to_string(g.nodes[i].id));
    }
  }

  std::size_t roots = 0;
  std::unordered_map<int, std::vector<int>> children;
  std::vector<int> root_ids;
  for (const RenderNode& n : g.nodes) {
    const Rect& b = n.box;
    if (!std::isfinite(b.x) || !std::isfinite(b.y) || !std::isfinite(b.w) ||
        !std::isfinite(b.h)) {
      violations.push_back("non-finite box: node " + std::to_string(n.id));
    } else if (b.w < 0.0 || b.h < 0.0) {
      violations.push_back("negative size: node " + std::to_string(n.id));
    }
    if (!n.parent_id) {
      ++roots;
      root_ids.push_back(n.id);
      continue;
    }
    if (!index.contains(*n.parent_id)) {
      violations.push_back("dangling parent: node " + std::to_string(n.id));
      continue;
    }
    children[*n.parent_id].push_back(n.id);
  }
  if (roots == 0) violations.emplace_back("no root");
  if (roots > 1) violations.emplace_back("multiple roots");

  for (const RenderNode& n : g.nodes) {
    if (n.is_text() && children.contains(n.id)) {
      violations.push_back("text node has children: node " + std::to_string(n.id));
    }
  }

  // Anything with a resolvable parent that no root reaches sits on a cycle.
  std::set<int> reached;
  std::vector<int> stack(root_ids.begin(), root_ids.end());
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (!reached.insert(id).second) continue;
    if (auto it = children.find(id); it != children.end()) {
      for (int c : it->second) stack.push_back(c);
    }
  }
  for (const RenderNode& n : g.nodes) {
    if (n.parent_id && index.contains(*n.parent_id) && !reached.contains(n.id)) {
      violations.push_back("cycle: node " + std::to_string(n.id));
    }
  }
  return violations;
}

namespace {

StringMap parse_string_map(const json& j, const std::string& field) {
  if (!j.is_object()) throw SchemaViolation(field, "must be an object");
  StringMap out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw SchemaViolation(field + "." + k, "must be a string");
    out.emplace(k, v.get<std::string>());
  }
  return out;
}

int require_int(const json& j, const char* key, const std::string& field) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw SchemaViolation(field + "." + key, "must be an integer");
  }
  return j.at(key).get<int>();
}

bool is_lowercase_tag(const std::string& tag) {
  if (tag == "#text") return true;
  if (tag.empty()) return false;
  return std::none_of(tag.begin(), tag.end(),
                      [](unsigned char c) { return std::isupper(c) || std::isspace(c); });
}

json parse_json_document(const std::string& text, const std::string& field) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaViolation(field, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

RenderGeometry parse_geometry_json(const std::string& text) {
  const json doc = parse_json_document(text, "geometry");
  if (!doc.is_object()) throw SchemaViolation("geometry", "must be an object");
  if (!doc.contains("page") || !doc.at("page").is_object()) {
    throw SchemaViolation("page", "must be an object");
  }
  RenderGeometry g;
  g.page_width = require_int(doc.at("page"), "width", "page");
  g.page_height = require_int(doc.at("page"), "height", "page");
  if (g.page_width <= 0) throw SchemaViolation("page.width", "must be > 0");
  if (g.page_height <= 0) throw SchemaViolation("page.height", "must be > 0");
  if (!doc.contains("nodes") || !doc.at("nodes").is_array()) {
    throw SchemaViolation("nodes", "must be an array");
  }
  std::size_t i = 0;
  for (const json& jn : doc.at("nodes")) {
    const std::string field = "nodes[" + std::to_string(i++) + "]";
    if (!jn.is_object()) throw SchemaViolation(field, "must be an object");
    RenderNode n;
    n.id = require_int(jn, "id", field);
    if (!jn.contains("parent")) throw SchemaViolation(field + ".parent", "required");
    const json& parent = jn.at("parent");
    if (parent.is_number_integer()) {
      n.parent_id = parent.get<int>();
    } else if (!parent.is_null()) {
      throw SchemaViolation(field + ".parent", "must be an integer or null");
    }
    if (!jn.contains("tag") || !jn.at("tag").is_string()) {
      throw SchemaViolation(field + ".tag", "must be a string");
    }
    n.tag = jn.at("tag").get<std::string>();
    if (!is_lowercase_tag(n.tag)) {
      throw SchemaViolation(field + ".tag", "must be a lowercase element name or #text");
    }
    if (!jn.contains("box") || !jn.at("box").is_array() || jn.at("box").size() != 4) {
      throw SchemaViolation(field + ".box", "must be [x, y, w, h]");
    }
    for (const json& v : jn.at("box")) {
      if (!v.is_number()) throw SchemaViolation(field + ".box", "must contain numbers");
    }
    const json& box = jn.at("box");
    n.box = Rect{box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
                 box[3].get<double>()};
    if (!jn.contains("visible") || !jn.at("visible").is_boolean()) {
      throw SchemaViolation(field + ".visible", "must be a boolean");
    }
    n.visible = jn.at("visible").get<bool>();
    n.styles = parse_string_map(jn.value("styles", json::object()), field + ".styles");
    n.attrs = parse_string_map(jn.value("attrs", json::object()), field + ".attrs");
    if (jn.contains("text")) {
      if (!jn.at("text").is_string()) throw SchemaViolation(field + ".text", "must be a string");
      n.text = jn.at("text").get<std::string>();
    }
    g.nodes.push_back(std::move(n));
  }
  return g;
}

std::string geometry_to_json(const RenderGeometry& g) {
  ordered_json doc;
  doc["page"] = {{"width", g.page_width}, {"height", g.page_height}};
  ordered_json nodes = ordered_json::array();
  for (const RenderNode& n : g.nodes) {
    ordered_json jn;
    jn["id"] = n.id;
    jn["parent"] = n.parent_id ? ordered_json(*n.parent_id) : ordered_json(nullptr);
    jn["tag"] = n.tag;
    jn["box"] = {n.box.x, n.box.y, n.box.w, n.box.h};
    jn["visible"] = n.visible;
    jn["styles"] = n.styles;
    if (n.is_text() || !n.text.empty()) jn["text"] = n.text;
    jn["attrs"] = n.attrs;
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(1) + "\n";
}

PageMeta parse_meta_json(const std::string& text) {
  const json doc = parse_json_document(text, "meta");
  if (!doc.is_object()) throw SchemaViolation("meta", "must be an object");
  PageMeta meta;
  if (!doc.contains("url") || !doc.at("url").is_string()) {
    throw SchemaViolation("url", "must be a string");
  }
  meta.url = doc.at("url").get<std::string>();
  if (meta.url.empty()) throw SchemaViolation("url", "must be non-empty");
  if (!doc.contains("captured_at") || !doc.at("captured_at").is_string()) {
    throw SchemaViolation("captured_at", "must be an ISO-8601 string");
  }
  meta.captured_at = doc.at("captured_at").get<std::string>();
  static const std::regex iso8601(
      R"(\d{4}-\d{2}-\d{2}(T\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?)");
  if (!std::regex_match(meta.captured_at, iso8601)) {
    throw SchemaViolation("captured_at", "must be an ISO-8601 timestamp");
  }
  if (doc.contains("page_type_hint") && !doc.at("page_type_hint").is_null()) {
    const json& hint = doc.at("page_type_hint");
    if (!hint.is_string()) throw SchemaViolation("page_type_hint", "must be a string");
    try {
      meta.page_type_hint = parse_page_type(hint.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw SchemaViolation("page_type_hint", "must be one of serp, video, content");
    }
  }
  return meta;
}

std::string meta_to_json(const PageMeta& meta) {
  ordered_json doc;
  doc["url"] = meta.url;
  doc["captured_at"] = meta.captured_at;
  if (meta.page_type_hint) doc["page_type_hint"] = to_string(*meta.page_type_hint);
  return doc.dump(1) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

PageSnapshot load_snapshot(const std::string& bundle_dir) {
  const fs::path dir(bundle_dir);
  for (const char* name : {"page.html", "screenshot.png", "geometry.json", "meta.json"}) {
    if (!fs::is_regular_file(dir / name)) throw MissingFile(name);
  }
  PageSnapshot s;
  s.id = dir.filename().string();
  if (s.id.empty()) s.id = dir.parent_path().filename().string();
  s.html = read_text_file((dir / "page.html").string());
  if (s.html.empty()) throw SchemaViolation("page.html", "must be non-empty");

  s.geometry = parse_geometry_json(read_text_file((dir / "geometry.json").string()));
  const auto violations = validate_geometry(s.geometry);
  if (!violations.empty()) {
    std::string joined;
    for (const auto& v : violations) joined += (joined.empty() ? "" : "; ") + v;
    throw SchemaViolation("geometry.nodes", joined);
  }
  s.meta = parse_meta_json(read_text_file((dir / "meta.json").string()));

  try {
    s.screenshot = decode_png(read_binary((dir / "screenshot.png").string()));
  } catch (const ImageError& e) {
    throw SchemaViolation("screenshot.png", e.what());
  }
  if (s.screenshot.width != s.geometry.page_width ||
      s.screenshot.height != s.geometry.page_height) {
    throw DimensionMismatch(
        "screenshot is " + std::to_string(s.screenshot.width) + "x" +
        std::to_string(s.screenshot.height) + " but geometry says " +
        std::to_string(s.geometry.page_width) + "x" +
        std::to_string(s.geometry.page_height));
  }
  return s;
}

void write_snapshot(const PageSnapshot& snapshot, const std::string& bundle_dir) {
  const fs::path dir(bundle_dir);
  fs::create_directories(dir);
  write_text_file((dir / "page.html").string(), snapshot.html);
  write_binary((dir / "screenshot.png").string(), encode_png(snapshot.screenshot));
  write_text_file((dir / "geometry.json").string(), geometry_to_json(snapshot.geometry));
  write_text_file((dir / "meta.json").string(), meta_to_json(snapshot.meta));
}

PageTypeRules PageTypeRules::defaults() {
  PageTypeRules r;
  for (const char* host : {"google.com", "google.de", "google.co.uk", "google.fr",
                           "google.at", "google.ch", "bing.com", "ecosia.org"}) {
    r.serp.push_back({host, "/search"});
  }
  r.serp.push_back({"duckduckgo.com", ""});
  r.video_hosts = {"youtube.com", "youtu.be", "vimeo.com", "dailymotion.com"};
  return r;
}

PageTypeRules PageTypeRules::from_json(const std::string& text) {
  const json doc = parse_json_document(text, "page_types");
  PageTypeRules r;
  if (!doc.is_object()) throw SchemaViolation("page_types", "must be an object");
  for (const json& rule : doc.value("serp", json::array())) {
    if (!rule.is_object() || !rule.contains("host") || !rule.at("host").is_string()) {
      throw SchemaViolation("serp", "entries need a string \"host\"");
    }
    r.serp.push_back({rule.at("host").get<std::string>(),
                      rule.value("path_prefix", std::string())});
  }
  for (const json& host : doc.value("video_hosts", json::array())) {
    if (!host.is_string()) throw SchemaViolation("video_hosts", "must hold strings");
    r.video_hosts.push_back(host.get<std::string>());
  }
  return r;
}

std::string PageTypeRules::to_json() const {
  ordered_json doc;
  doc["serp"] = ordered_json::array();
  for (const SerpRule& rule : serp) {
    doc["serp"].push_back({{"host", rule.host_suffix}, {"path_prefix", rule.path_prefix}});
  }
  doc["video_hosts"] = video_hosts;
  return doc.dump(2) + "\n";
}

namespace {

struct UrlParts {
  std::string host;
  std::string path;
};

UrlParts split_url(const std::string& url) {
  std::string rest = url;
  if (auto scheme = rest.find("://"); scheme != std::string::npos) {
    rest = rest.substr(scheme + 3);
  }
  const std::size_t path_start = rest.find_first_of("/?#");
  std::string authority = rest.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : rest.substr(path_start);
  if (auto at = authority.rfind('@'); at != std::string::npos) authority = authority.substr(at + 1);
  if (auto colon = authority.find(':'); colon != std::string::npos) authority.resize(colon);
  std::transform(authority.begin(), authority.end(), authority.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (auto cut = path.find_first_of("?#"); cut != std::string::npos) path.resize(cut);
  if (path.empty()) path = "/";
  return {authority, path};
}

bool host_matches(const std::string& host, const std::string& suffix) {
  if (host == suffix) return true;
  return host.size() > suffix.size() &&
         host.compare(host.size() - suffix.size(), suffix.size(), suffix) == 0 &&
         host[host.size() - suffix.size() - 1] == '.';
}

}  // namespace

PageType classify_page_type(const std::string& url, std::optional<PageType> hint,
                            const PageTypeRules& rules) {
  if (hint) return *hint;
  const UrlParts parts = split_url(url);
  for (const auto& rule : rules.serp) {
    if (host_matches(parts.host, rule.host_suffix) &&
        parts.path.rfind(rule.path_prefix, 0) == 0) {
      return PageType::kSerp;
    }
  }
  for (const auto& host : rules.video_hosts) {
    if (host_matches(parts.host, host)) return PageType::kVideo;
  }
  return PageType::kContent;
}

std::vector<SessionRecord> parse_sessions_jsonl(const std::string& text,
                                                const PageTypeRules& rules) {
  std::vector<SessionRecord> sessions;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    const json doc = parse_json_document(line, where);
    if (!doc.is_object()) throw SchemaViolation(where, "must be an object");
    SessionRecord s;
    if (!doc.contains("user_id") || !doc.at("user_id").is_string()) {
      throw SchemaViolation(where + ".user_id", "must be a string");
    }
    s.user_id = doc.at("user_id").get<std::string>();
    if (!doc.contains("test") || !doc.at("test").is_object()) {
      throw SchemaViolation(where + ".test", "must be an object");
    }
    const json& t = doc.at("test");
    s.test.pre_correct = require_int(t, "pre_correct", where + ".test");
    s.test.post_correct = require_int(t, "post_correct", where + ".test");
    s.test.n_items = require_int(t, "n_items", where + ".test");
    if (s.test.n_items <= 0) throw SchemaViolation(where + ".test.n_items", "must be > 0");
    if (s.test.pre_correct < 0 || s.test.pre_correct > s.test.n_items) {
      throw SchemaViolation(where + ".test.pre_correct", "must lie in [0, n_items]");
    }
    if (s.test.post_correct < 0 || s.test.post_correct > s.test.n_items) {
      throw SchemaViolation(where + ".test.post_correct", "must lie in [0, n_items]");
    }
    std::size_t i = 0;
    for (const json& je : doc.value("events", json::array())) {
      const std::string field = where + ".events[" + std::to_string(i++) + "]";
      NavigationEvent e;
      if (!je.contains("timestamp") || !je.at("timestamp").is_number()) {
        throw SchemaViolation(field + ".timestamp", "must be a number");
      }
      e.timestamp = je.at("timestamp").get<double>();
      if (!(e.timestamp >= 0.0)) throw SchemaViolation(field + ".timestamp", "must be >= 0");
      if (!je.contains("url") || !je.at("url").is_string()) {
        throw SchemaViolation(field + ".url", "must be a string");
      }
      e.url = je.at("url").get<std::string>();
      if (je.contains("snapshot_id") && !je.at("snapshot_id").is_null()) {
        e.snapshot_id = je.at("snapshot_id").get<std::string>();
      }
      if (je.contains("query") && !je.at("query").is_null()) {
        e.query = je.at("query").get<std::string>();
      }
      std::optional<PageType> declared;
      if (je.contains("page_type") && !je.at("page_type").is_null()) {
        try {
          declared = parse_page_type(je.at("page_type").get<std::string>());
        } catch (const std::exception&) {
          throw SchemaViolation(field + ".page_type", "must be one of serp, video, content");
        }
      }
      e.page_type = e.query ? PageType::kSerp : classify_page_type(e.url, declared, rules);
      if (e.query && declared && *declared != PageType::kSerp) {
        throw SchemaViolation(field + ".page_type", "query events must be serp");
      }
      if (!s.events.empty() && e.timestamp < s.events.back().timestamp) {
        throw SchemaViolation(field + ".timestamp", "events must be non-decreasing in time");
      }
      s.events.push_back(std::move(e));
    }
    sessions.push_back(std::move(s));
  }
  return sessions;
}

std::string session_to_json_line(const SessionRecord& session) {
  ordered_json doc;
  doc["user_id"] = session.user_id;
  doc["events"] = ordered_json::array();
  for (const NavigationEvent& e : session.events) {
    ordered_json je;
    je["timestamp"] = e.timestamp;
    je["url"] = e.url;
    je["snapshot_id"] = e.snapshot_id ? ordered_json(*e.snapshot_id) : ordered_json(nullptr);
    if (e.query) je["query"] = *e.query;
    je["page_type"] = to_string(e.page_type);
    doc["events"].push_back(std::move(je));
  }
  doc["test"] = {{"pre_correct", session.test.pre_correct},
                 {"post_correct", session.test.post_correct},
                 {"n_items", session.test.n_items}};
  return doc.dump();
}

}  // namespace viscom
