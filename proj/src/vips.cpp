#include "viscom/vips.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "json.hpp"

namespace viscom {

using ordered_json = nlohmann::ordered_json;

std::string to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::kText:
      return "text";
    case BlockKind::kImage:
      return "image";
    case BlockKind::kForm:
      return "form";
    case BlockKind::kOther:
      return "other";
    case BlockKind::kComposite:
      return "composite";
  }
  return "other";
}

VipsConfig VipsConfig::from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  VipsConfig c;
  c.gap_threshold = doc.value("gap_threshold", c.gap_threshold);
  c.root_doc = doc.value("root_doc", c.root_doc);
  c.sectioning_doc = doc.value("sectioning_doc", c.sectioning_doc);
  c.default_doc = doc.value("default_doc", c.default_doc);
  c.background_doc = doc.value("background_doc", c.background_doc);
  c.gap_doc = doc.value("gap_doc", c.gap_doc);
  c.inline_doc = doc.value("inline_doc", c.inline_doc);
  return c;
}

namespace {

bool tag_in(std::string_view tag, std::initializer_list<std::string_view> set) {
  return std::find(set.begin(), set.end(), tag) != set.end();
}

bool is_image_tag(std::string_view t) { return tag_in(t, {"img", "svg", "canvas", "picture"}); }
bool is_form_control(std::string_view t) {
  return tag_in(t, {"input", "select", "textarea", "button"});
}
bool is_media_tag(std::string_view t) { return tag_in(t, {"video", "audio"}); }
bool is_sectioning(std::string_view t) {
  return tag_in(t, {"header", "nav", "main", "article", "section", "aside", "footer"});
}
bool is_structural(std::string_view t) { return tag_in(t, {"html", "head", "body"}); }

bool is_inline_level(const RenderNode& n) {
  if (n.is_text()) return true;
  const std::string display = n.style("display");
  if (!display.empty()) return display.rfind("inline", 0) == 0;
  return tag_in(n.tag, {"a", "abbr", "b", "bdi", "bdo", "br", "cite", "code", "data",
                        "dfn", "em", "font", "i", "img", "kbd", "label", "mark", "q",
                        "s", "samp", "small", "span", "strong", "sub", "sup", "time",
                        "u", "var", "wbr"});
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string normalized_background(const RenderNode& n) {
  std::string bg;
  for (char c : n.style("background-color")) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      bg += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (bg.empty() || bg == "transparent" || bg == "rgba(0,0,0,0)") return "transparent";
  return bg;
}

class Segmenter {
 public:
  Segmenter(const RenderGeometry& g, int pdoc, const VipsConfig& config)
      : g_(g), pdoc_(pdoc), config_(config) {
    for (const RenderNode& n : g.nodes) {
      by_id_[n.id] = &n;
      if (n.parent_id) {
        children_[*n.parent_id].push_back(&n);
      } else {
        root_ = &n;
      }
    }
  }

  VipsTree run() {
    VipsTree tree;
    tree.pdoc = pdoc_;
    const Rect page = g_.page_box();
    std::optional<VipsBlock> root;
    if (root_ != nullptr && has_visible_content(*root_, page)) {
      root = make_block(*root_, page, config_.root_doc);
    }
    if (!root) {
      VipsBlock degenerate;
      degenerate.box = page;
      degenerate.doc = config_.inline_doc;
      degenerate.kind = BlockKind::kOther;
      tree.root = std::move(degenerate);
    } else {
      tree.root = std::move(*root);
    }
    return tree;
  }

 private:
  const std::vector<const RenderNode*>& kids_of(const RenderNode& n) const {
    static const std::vector<const RenderNode*> none;
    auto it = children_.find(n.id);
    return it == children_.end() ? none : it->second;
  }

  // Visible, positive-area children after clipping to `box`.
  std::vector<const RenderNode*> valid_kids(const RenderNode& n, const Rect& box) const {
    std::vector<const RenderNode*> out;
    for (const RenderNode* c : kids_of(n)) {
      if (c->visible && !intersect(c->box, box).empty()) out.push_back(c);
    }
    return out;
  }

  bool has_visible_content(const RenderNode& n, const Rect& clip) const {
    if (!n.visible) return false;
    const Rect box = intersect(n.box, clip);
    if (box.empty()) return false;
    if (!is_structural(n.tag)) return true;
    for (const RenderNode* c : kids_of(n)) {
      if (has_visible_content(*c, box)) return true;
    }
    return false;
  }

  bool indivisible(const RenderNode& n, const std::vector<const RenderNode*>& kids) const {
    if (n.is_text() || is_image_tag(n.tag) || is_form_control(n.tag) ||
        is_media_tag(n.tag)) {
      return true;
    }
    return std::all_of(kids.begin(), kids.end(),
                       [](const RenderNode* c) { return is_inline_level(*c); });
  }

  struct Content {
    bool text = false;
    bool image = false;
    bool form = false;
  };

  void scan(const RenderNode& n, const Rect& clip, Content& c, std::set<int>& ids) const {
    if (!n.visible) return;
    const Rect box = intersect(n.box, clip);
    if (box.empty()) return;
    ids.insert(n.id);
    if (n.is_text() && !is_blank(n.text)) c.text = true;
    if (is_image_tag(n.tag)) c.image = true;
    if (is_form_control(n.tag)) c.form = true;
    for (const RenderNode* k : kids_of(n)) scan(*k, box, c, ids);
  }

  VipsBlock leaf(const RenderNode& n, const Rect& box, int doc) const {
    VipsBlock b;
    b.box = box;
    b.doc = doc;
    Content c;
    scan(n, box, c, b.source_nodes);
    if (n.is_text()) {
      b.kind = BlockKind::kText;
    } else if (is_image_tag(n.tag)) {
      b.kind = BlockKind::kImage;
    } else if (is_form_control(n.tag)) {
      b.kind = BlockKind::kForm;
    } else if (c.text) {
      b.kind = BlockKind::kText;
    } else if (c.image) {
      b.kind = BlockKind::kImage;
    } else if (c.form) {
      b.kind = BlockKind::kForm;
    } else {
      b.kind = BlockKind::kOther;
    }
    return b;
  }

  int split_doc(const std::vector<const RenderNode*>& content, bool has_rule,
                const Rect& clip) const {
    if (std::any_of(content.begin(), content.end(),
                    [](const RenderNode* c) { return is_sectioning(c->tag); })) {
      return config_.sectioning_doc;
    }
    bool background_change = has_rule;
    bool gap = false;
    for (std::size_t i = 0; i + 1 < content.size(); ++i) {
      if (normalized_background(*content[i]) != normalized_background(*content[i + 1])) {
        background_change = true;
      }
      const Rect a = intersect(content[i]->box, clip);
      const Rect b = intersect(content[i + 1]->box, clip);
      if (separation(a, b) >= config_.gap_threshold) gap = true;
    }
    if (background_change) return config_.background_doc;
    if (gap) return config_.gap_doc;
    return config_.default_doc;
  }

  std::optional<VipsBlock> make_block(const RenderNode& n, const Rect& clip, int doc) const {
    if (!n.visible) return std::nullopt;
    const Rect box = intersect(n.box, clip);
    if (box.empty()) return std::nullopt;

    const auto kids = valid_kids(n, box);
    if (indivisible(n, kids)) return leaf(n, box, config_.inline_doc);

    std::vector<const RenderNode*> content;
    bool has_rule = false;
    for (const RenderNode* k : kids) {
      if (k->tag == "hr") {
        has_rule = true;
      } else {
        content.push_back(k);
      }
    }
    if (content.empty()) return leaf(n, box, config_.inline_doc);
    if (content.size() == 1) {
      // Single-child wrappers collapse onto the child.
      auto inner = make_block(*content.front(), box, doc);
      if (inner) inner->source_nodes.insert(n.id);
      return inner;
    }
    if (doc >= pdoc_) return leaf(n, box, doc);

    const int child_doc = split_doc(content, has_rule, box);
    VipsBlock b;
    b.box = box;
    b.doc = doc;
    b.kind = BlockKind::kComposite;
    b.source_nodes.insert(n.id);
    for (const RenderNode* k : content) {
      if (auto child = make_block(*k, box, child_doc)) b.children.push_back(std::move(*child));
    }
    if (b.children.size() == 1) {
      VipsBlock only = std::move(b.children.front());
      only.source_nodes.insert(n.id);
      return only;
    }
    return b;
  }

  const RenderGeometry& g_;
  int pdoc_;
  VipsConfig config_;
  const RenderNode* root_ = nullptr;
  std::unordered_map<int, const RenderNode*> by_id_;
  std::unordered_map<int, std::vector<const RenderNode*>> children_;
};

void shape_of(const VipsBlock& b, std::size_t depth, TreeShape& s) {
  s.layers = std::max(s.layers, depth);
  if (b.is_leaf()) {
    ++s.leaf;
    return;
  }
  ++s.non_leaf;
  for (const VipsBlock& c : b.children) shape_of(c, depth + 1, s);
}

void collect_leaves(const VipsBlock& b, std::vector<const VipsBlock*>& out) {
  if (b.is_leaf()) {
    out.push_back(&b);
    return;
  }
  for (const VipsBlock& c : b.children) collect_leaves(c, out);
}

ordered_json block_json(const VipsBlock& b) {
  ordered_json j;
  j["box"] = {b.box.x, b.box.y, b.box.w, b.box.h};
  j["doc"] = b.doc;
  j["kind"] = to_string(b.kind);
  j["source_nodes"] = b.source_nodes;
  j["children"] = ordered_json::array();
  for (const VipsBlock& c : b.children) j["children"].push_back(block_json(c));
  return j;
}

}  // namespace

VipsTree segment_vips(const RenderGeometry& g, int pdoc, const VipsConfig& config) {
  if (pdoc < 1 || pdoc > 10) throw std::invalid_argument("pdoc must lie in [1, 10]");
  const auto violations = validate_geometry(g);
  if (!violations.empty()) {
    throw std::invalid_argument("invalid geometry: " + violations.front());
  }
  return Segmenter(g, pdoc, config).run();
}

TreeShape tree_shape(const VipsTree& t) {
  TreeShape s;
  shape_of(t.root, 1, s);
  return s;
}

std::vector<const VipsBlock*> leaves(const VipsTree& t) {
  std::vector<const VipsBlock*> out;
  collect_leaves(t.root, out);
  return out;
}

FeatureVector layout_features(const VipsTree& t, const RenderGeometry& g) {
  const TreeShape shape = tree_shape(t);
  std::vector<Rect> text_boxes;
  for (const VipsBlock* b : leaves(t)) {
    if (b->kind == BlockKind::kText) text_boxes.push_back(b->box);
  }
  const double page_area = static_cast<double>(g.page_width) * g.page_height;
  const double text_area = std::clamp(union_area(text_boxes) / page_area, 0.0, 1.0);
  const double texts_per_mpx = static_cast<double>(text_boxes.size()) / (page_area / 1e6);
  return FeatureVector(registry::layout(),
                       std::vector<double>{static_cast<double>(shape.non_leaf),
                                           static_cast<double>(shape.leaf), text_area,
                                           texts_per_mpx,
                                           static_cast<double>(shape.layers)});
}

std::string vips_tree_to_json(const VipsTree& t) {
  ordered_json doc;
  doc["pdoc"] = t.pdoc;
  doc["root"] = block_json(t.root);
  return doc.dump(1) + "\n";
}

}  // namespace viscom
