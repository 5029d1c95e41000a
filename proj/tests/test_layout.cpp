#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "viscom/aesthetics.hpp"
#include "viscom/snapshot.hpp"
#include "viscom/visual.hpp"
#include "viscom/vips.hpp"

using namespace viscom;
using viscom::test::fixture;

namespace {

RenderGeometry geometry_of(const std::string& id) {
  return load_snapshot(fixture("bundles/" + id)).geometry;
}

std::vector<BlockKind> leaf_kinds(const VipsTree& t) {
  std::vector<BlockKind> out;
  for (const VipsBlock* b : leaves(t)) out.push_back(b->kind);
  return out;
}

ObjectSet objects(std::initializer_list<Rect> rs, double w = 100, double h = 100) {
  ObjectSet o;
  o.page_width = w;
  o.page_height = h;
  for (const Rect& r : rs) o.objects.push_back({r, ObjectClass::kOther});
  return o;
}

}  // namespace

TEST_SUITE("vips") {
  TEST_CASE("single div collapses to one text leaf") {
    const auto t = segment_vips(geometry_of("f1_single"));
    const auto s = tree_shape(t);
    CHECK(s.non_leaf == 0);
    CHECK(s.leaf == 1);
    CHECK(s.layers == 1);
    CHECK(t.root.kind == BlockKind::kText);
    CHECK(t.root.box == Rect{20, 20, 360, 60});
    CHECK(t.root.doc == 10);
    CHECK(t.root.source_nodes == std::set<int>{0, 1, 2, 3});
  }

  TEST_CASE("gap-separated columns") {
    const auto g = geometry_of("f2_columns");
    const auto t = segment_vips(g);
    const auto s = tree_shape(t);
    CHECK(s.non_leaf == 1);
    CHECK(s.leaf == 2);
    CHECK(s.layers == 2);
    CHECK(t.root.doc == 1);
    CHECK(leaf_kinds(t) == std::vector<BlockKind>{BlockKind::kText, BlockKind::kImage});
    CHECK(t.root.children[1].box == Rect{220, 0, 180, 300});

    const auto f = layout_features(t, g);
    CHECK(f.value("viscom.layout.n_vips_non_leaf_nodes") == 1);
    CHECK(f.value("viscom.layout.n_vips_leaf_nodes") == 2);
    CHECK(f.value("viscom.layout.text_area_to_whole_page") == doctest::Approx(0.45));
    CHECK(f.value("viscom.layout.n_texts_to_whole_page") == doctest::Approx(1.0 / 0.12));
    CHECK(f.value("viscom.layout.n_vips_layers") == 2);
  }

  TEST_CASE("sectioning elements") {
    const auto t = segment_vips(geometry_of("f3_sections"));
    const auto s = tree_shape(t);
    CHECK(s.non_leaf == 2);
    CHECK(s.leaf == 4);
    CHECK(s.layers == 3);
    REQUIRE(t.root.children.size() == 3);
    CHECK(t.root.children[0].doc == 10);
    CHECK(t.root.children[1].doc == 4);
    CHECK(t.root.children[1].children.size() == 2);
    CHECK(leaf_kinds(t) == std::vector<BlockKind>{BlockKind::kText, BlockKind::kText,
                                                  BlockKind::kText, BlockKind::kForm});
  }

  TEST_CASE("permitted doc stops the division") {
    const auto g = geometry_of("f4_pdoc");
    const auto t6 = segment_vips(g, 6);
    auto s = tree_shape(t6);
    CHECK(s.non_leaf == 1);
    CHECK(s.leaf == 2);
    CHECK(s.layers == 2);
    CHECK(t6.root.children[0].doc == 7);
    CHECK(t6.root.children[0].kind == BlockKind::kText);

    const auto t8 = segment_vips(g, 8);
    s = tree_shape(t8);
    CHECK(s.non_leaf == 2);
    CHECK(s.leaf == 3);
    CHECK(s.layers == 3);
    CHECK(t8.root.children[0].children.size() == 2);

    const auto t1 = segment_vips(g, 1);
    CHECK(tree_shape(t1).leaf == 1);
  }

  TEST_CASE("rules, hidden and off-page nodes") {
    const auto t = segment_vips(geometry_of("f5_rule_hidden"));
    const auto s = tree_shape(t);
    CHECK(s.non_leaf == 1);
    CHECK(s.leaf == 2);
    CHECK(s.layers == 2);
    CHECK(leaf_kinds(t) == std::vector<BlockKind>{BlockKind::kText, BlockKind::kImage});
    for (int hidden : {7, 8, 9, 10}) CHECK_FALSE(t.root.source_nodes.contains(hidden));
  }

  TEST_CASE("leaf count grows with pdoc") {
    for (const char* id : {"f1_single", "f2_columns", "f3_sections", "f4_pdoc", "f5_rule_hidden"}) {
      const auto g = geometry_of(id);
      std::size_t prev = 0;
      for (int pdoc = 1; pdoc <= 10; ++pdoc) {
        const std::size_t n = tree_shape(segment_vips(g, pdoc)).leaf;
        CHECK(n >= prev);
        prev = n;
      }
    }
  }

  TEST_CASE("degenerate page and bad input") {
    RenderGeometry g;
    g.page_width = 50;
    g.page_height = 40;
    g.nodes.push_back({0, std::nullopt, "html", {0, 0, 50, 40}});
    g.nodes.push_back({1, 0, "body", {0, 0, 50, 40}});
    const auto t = segment_vips(g);
    CHECK(t.root.is_leaf());
    CHECK(t.root.kind == BlockKind::kOther);
    CHECK(t.root.box == g.page_box());
    CHECK_THROWS_AS(segment_vips(g, 0), std::invalid_argument);
    CHECK_THROWS_AS(segment_vips(g, 11), std::invalid_argument);
    g.nodes.push_back({2, 7, "div", {0, 0, 1, 1}});
    CHECK_THROWS_AS(segment_vips(g), std::invalid_argument);
  }

  TEST_CASE("rule table config") {
    const auto cfg = VipsConfig::from_json(R"({"gap_threshold": 50})");
    CHECK(cfg.gap_threshold == 50);
    CHECK(cfg.default_doc == 5);
    const auto t = segment_vips(geometry_of("f4_pdoc"), 6, cfg);
    CHECK(tree_shape(t).leaf == 3);
  }

  TEST_CASE("json dump") {
    const auto j = nlohmann::json::parse(vips_tree_to_json(segment_vips(geometry_of("f2_columns"))));
    CHECK(j["pdoc"] == 6);
    CHECK(j["root"]["kind"] == "composite");
    CHECK(j["root"]["children"].size() == 2);
  }
}

TEST_SUITE("visual") {
  TEST_CASE("hsv conversion") {
    auto h = rgb_to_hsv(255, 0, 0);
    CHECK(h.h == 0.0);
    CHECK(h.s == 1.0);
    CHECK(h.v == 1.0);
    h = rgb_to_hsv(0, 0, 255);
    CHECK(h.h == doctest::Approx(240));
    h = rgb_to_hsv(255, 0, 255);
    CHECK(h.h == doctest::Approx(300));
    h = rgb_to_hsv(0, 0, 0);
    CHECK(h.s == 0.0);
  }

  TEST_CASE("matches the colorsys oracle") {
    const auto expected =
        nlohmann::json::parse(read_text_file(fixture("visual_expected.json")));
    for (const auto& [id, vals] : expected.items()) {
      const auto s = load_snapshot(fixture("bundles/" + id));
      const auto f = visual_features(s.screenshot);
      CAPTURE(id);
      CHECK(f.value("viscom.visual.avg_brightness") ==
            doctest::Approx(vals["avg_brightness"].get<double>()).epsilon(1e-12));
      CHECK(f.value("viscom.visual.avg_colorfulness") ==
            doctest::Approx(vals["avg_colorfulness"].get<double>()).epsilon(1e-12));
      CHECK(f.value("viscom.visual.avg_hue") ==
            doctest::Approx(vals["avg_hue"].get<double>()).epsilon(1e-9));
      CHECK(f.value("viscom.visual.page_width") == s.geometry.page_width);
      CHECK(f.value("viscom.visual.aspect_ratio") ==
            doctest::Approx(double(s.geometry.page_width) / s.geometry.page_height));
    }
    const auto images = nlohmann::json::parse(read_text_file(fixture("images/expected.json")));
    for (const auto& [name, vals] : images.items()) {
      const auto f = visual_features(decode_png(read_binary(fixture("images/" + name))));
      CAPTURE(name);
      CHECK(f.value("viscom.visual.avg_brightness") ==
            doctest::Approx(vals["avg_brightness"].get<double>()));
      CHECK(f.value("viscom.visual.avg_hue") == doctest::Approx(vals["avg_hue"].get<double>()));
    }
  }

  TEST_CASE("uniform image") {
    Screenshot s(6, 4);
    s.fill(128, 128, 128);
    const auto f = visual_features(s);
    CHECK(f.value("viscom.visual.avg_brightness") == doctest::Approx(128.0 / 255.0));
    CHECK(f.value("viscom.visual.avg_hue") == 0.0);
    CHECK(f.value("viscom.visual.avg_colorfulness") == 0.0);
    CHECK(f.value("viscom.visual.png_size") > 0.0);
    CHECK(f.value("viscom.visual.jpg_size") > f.value("viscom.visual.png_size"));
    CHECK_THROWS_AS(visual_features(Screenshot{}), ImageError);
  }

  TEST_CASE("pixel order does not matter") {
    Screenshot a(4, 1, {255, 0, 0, 0, 255, 0, 0, 0, 255, 9, 9, 9});
    Screenshot b(4, 1, {9, 9, 9, 0, 0, 255, 0, 255, 0, 255, 0, 0});
    const auto fa = visual_features(a), fb = visual_features(b);
    for (const char* n : {"viscom.visual.avg_brightness", "viscom.visual.avg_hue",
                          "viscom.visual.avg_colorfulness"}) {
      CHECK(fa.value(n) == fb.value(n));
    }
  }
}

TEST_SUITE("aesthetics") {
  TEST_CASE("single corner object") {
    const auto o = objects({{0, 0, 50, 50}});
    using M = Measure;
    CHECK(aesthetic_measure(M::kBalance, o) == 0.0);
    CHECK(aesthetic_measure(M::kEquilibrium, o) == doctest::Approx(0.5));
    CHECK(aesthetic_measure(M::kSymmetry, o) == 0.0);
    CHECK(aesthetic_measure(M::kSequence, o) == 1.0);
    CHECK(aesthetic_measure(M::kCohesion, o) == 1.0);
    CHECK(aesthetic_measure(M::kUnity, o) == 1.0);
    CHECK(aesthetic_measure(M::kProportion, o) == 1.0);
    CHECK(aesthetic_measure(M::kSimplicity, o) == 1.0);
    CHECK(aesthetic_measure(M::kDensity, o) == doctest::Approx(0.5));
    CHECK(aesthetic_measure(M::kRegularity, o) == doctest::Approx(0.5));
    CHECK(aesthetic_measure(M::kEconomy, o) == 1.0);
    CHECK(aesthetic_measure(M::kHomogeneity, o) == 0.0);
    CHECK(aesthetic_measure(M::kRhythm, o) == 1.0);
    CHECK(aesthetics_block(o).back() == doctest::Approx(8.5 / 13.0));
  }

  TEST_CASE("diagonal pair") {
    const auto o = objects({{0, 0, 50, 50}, {50, 50, 50, 50}});
    using M = Measure;
    CHECK(aesthetic_measure(M::kBalance, o) == 1.0);
    CHECK(aesthetic_measure(M::kEquilibrium, o) == 1.0);
    CHECK(aesthetic_measure(M::kSymmetry, o) == doctest::Approx(1.0 / 3.0));
    CHECK(aesthetic_measure(M::kSequence, o) == doctest::Approx(0.5));
    CHECK(aesthetic_measure(M::kUnity, o) == doctest::Approx(0.75));
    CHECK(aesthetic_measure(M::kSimplicity, o) == doctest::Approx(0.5));
    CHECK(aesthetic_measure(M::kDensity, o) == 1.0);
    CHECK(aesthetic_measure(M::kRegularity, o) == doctest::Approx(0.5));
    CHECK(aesthetic_measure(M::kHomogeneity, o) == doctest::Approx(0.5));
    CHECK(aesthetic_measure(M::kRhythm, o) == doctest::Approx(0.0));
  }

  TEST_CASE("object on the centre line splits evenly") {
    const auto o = objects({{25, 25, 50, 50}});
    CHECK(aesthetic_measure(Measure::kBalance, o) == 1.0);
    CHECK(aesthetic_measure(Measure::kHomogeneity, o) == 1.0);
    CHECK(aesthetic_measure(Measure::kSymmetry, o) == 1.0);
  }

  TEST_CASE("empty sets, bad ids and arity") {
    const auto empty = objects({});
    for (int m = 1; m <= kMeasureCount; ++m) CHECK(aesthetic_measure(m, empty) == 0.0);
    CHECK_THROWS_AS(aesthetic_measure(0, empty), UnknownMeasure);
    CHECK_THROWS_AS(aesthetic_measure(14, empty), UnknownMeasure);
    const std::vector<double> twelve(12, 0.5);
    CHECK_THROWS_AS(order_and_complexity(twelve), WrongArity);
  }

  TEST_CASE("features per class") {
    const auto g = geometry_of("f3_sections");
    const auto f = aesthetics_features(segment_vips(g), g);
    REQUIRE(f.size() == 70);
    CHECK(f.names == registry::aesthetics());
    CHECK(f.value("viscom.aesthetics.image.balance") == 0.0);
    CHECK(f.value("viscom.aesthetics.form.economy") == 1.0);
    for (const auto& v : f.values) {
      CHECK(*v >= 0.0);
      CHECK(*v <= 1.0);
    }
  }
}
