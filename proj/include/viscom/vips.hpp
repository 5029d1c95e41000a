#pragma once

#include <set>
#include <string>
#include <vector>

#include "viscom/features.hpp"
#include "viscom/rect.hpp"
#include "viscom/snapshot.hpp"

namespace viscom {

enum class BlockKind { kText, kImage, kForm, kOther, kComposite };

std::string to_string(BlockKind kind);

struct VipsBlock {
  Rect box;
  std::vector<VipsBlock> children;
  int doc = 10;  // degree of coherence, 1..10
  std::set<int> source_nodes;
  BlockKind kind = BlockKind::kOther;

  bool is_leaf() const { return children.empty(); }
};

struct VipsTree {
  VipsBlock root;
  int pdoc = 6;
};

// Degree-of-coherence rule table. A block's doc records how it was separated
// from its siblings; blocks whose doc reaches the permitted doc are not
// divided further.
struct VipsConfig {
  double gap_threshold = 10.0;  // CSS px
  int root_doc = 1;
  int sectioning_doc = 4;       // siblings split by header/nav/main/...
  int default_doc = 5;          // siblings with no visible separator
  int background_doc = 6;       // siblings split by hr or a background change
  int gap_doc = 7;              // siblings split by whitespace >= gap_threshold
  int inline_doc = 10;          // indivisible content

  static VipsConfig from_json(const std::string& text);
};

// Requires validate_geometry(g) to be empty and 1 <= pdoc <= 10
// (std::invalid_argument otherwise). A page without any visible content
// node yields a single leaf covering the page box with kind kOther.
VipsTree segment_vips(const RenderGeometry& g, int pdoc = 6,
                      const VipsConfig& config = VipsConfig{});

struct TreeShape {
  std::size_t non_leaf = 0;
  std::size_t leaf = 0;
  std::size_t layers = 0;  // nodes on the longest root-to-leaf path
};

TreeShape tree_shape(const VipsTree& t);

// Leaves in pre-order.
std::vector<const VipsBlock*> leaves(const VipsTree& t);

// [n_vips_non_leaf_nodes, n_vips_leaf_nodes, text_area_to_whole_page,
//  n_texts_to_whole_page, n_vips_layers]. Text area is the union of text
// leaves over the page area; the text count is per 10^6 px^2 of page.
FeatureVector layout_features(const VipsTree& t, const RenderGeometry& g);

std::string vips_tree_to_json(const VipsTree& t);

}  // namespace viscom
