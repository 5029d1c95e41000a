#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace viscom {

class EmptyDocument : public std::runtime_error {
 public:
  EmptyDocument() : std::runtime_error("empty HTML document") {}
};

// Element or text node. Text nodes carry tag "#text" and no children.
struct DomNode {
  std::string tag;
  std::vector<DomNode> children;
  std::string text;
  std::map<std::string, std::string> attrs;

  bool is_text() const { return tag == "#text"; }
  bool is_element() const { return !is_text(); }
  // First descendant element (pre-order, including this node) with `name`.
  const DomNode* find(std::string_view name) const;

  friend bool operator==(const DomNode&, const DomNode&) = default;
};

// Error-tolerant parse into <html> with exactly one <head> and one <body>.
//
// This is a reduced HTML5 tree builder: tag and attribute names are
// case-folded, void elements never take children, p/li/dt/dd/option/tr/td/th
// are closed implicitly the way the HTML5 tree-construction rules close
// them, implied tbody/tr are inserted for bare table rows and cells, and
// unknown tags become ordinary elements. Raw-text elements (script, style)
// keep their content verbatim. The adoption agency algorithm and table
// foster parenting are not implemented. Comments and doctypes are dropped.
// Invalid UTF-8 is replaced with U+FFFD.
DomNode parse_dom(std::string_view html);

// <body> of a parse_dom() result.
const DomNode& body_of(const DomNode& document);

// Tree dump in the indented "| <tag>" format used by html5lib's test suite.
// Whitespace-only text nodes are omitted and attributes are listed sorted.
std::string debug_tree(const DomNode& document);

// Whitespace-collapsed text of the subtree, skipping script/style content.
std::string text_content(const DomNode& node);

bool is_void_element(std::string_view tag);

}  // namespace viscom
