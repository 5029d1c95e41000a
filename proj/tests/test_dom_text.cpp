#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "support.hpp"
#include "viscom/dom.hpp"
#include "viscom/dom_stats.hpp"
#include "viscom/snapshot.hpp"
#include "viscom/text.hpp"

using namespace viscom;
using viscom::test::fixture;

TEST_SUITE("dom") {
  TEST_CASE("parse trees match html5lib reference dumps") {
    std::size_t cases = 0;
    for (const auto& entry : std::filesystem::directory_iterator(fixture("html5lib"))) {
      if (entry.path().extension() != ".html") continue;
      auto tree_path = entry.path();
      tree_path.replace_extension(".tree");
      const auto html = read_text_file(entry.path().string());
      CAPTURE(entry.path().filename().string());
      CHECK(debug_tree(parse_dom(html)) == read_text_file(tree_path.string()));
      ++cases;
    }
    CHECK(cases == 20);
  }

  TEST_CASE("document always has head and body") {
    const auto doc = parse_dom("plain text");
    CHECK(doc.tag == "html");
    REQUIRE(doc.children.size() == 2);
    CHECK(doc.children[0].tag == "head");
    CHECK(body_of(doc).children.front().text == "plain text");
    CHECK_THROWS_AS(parse_dom(""), EmptyDocument);
  }

  TEST_CASE("invalid utf-8 is replaced") {
    const auto doc = parse_dom("<p>a\xff" "b</p>");
    CHECK(text_content(body_of(doc)) == "a\xEF\xBF\xBD" "b");
  }

  TEST_CASE("text content collapses whitespace and skips scripts") {
    const auto doc = parse_dom("<div>  one\n two <script>x()</script><b>three</b></div>");
    CHECK(text_content(body_of(doc)) == "one two three");
  }
}

TEST_SUITE("dom_stats") {
  TEST_CASE("hand counted page") {
    const auto doc = parse_dom(
        "<html><head><title>t</title></head><body>"
        "<div><h1>A</h1><p>x</p></div><div><h2>B</h2><h3>C</h3></div>"
        "<script>var a = 1;</script></body></html>");
    const auto f = html_features(doc);
    REQUIRE(f.size() == 31);
    CHECK(f.value("viscom.html.headings_count") == 3);
    CHECK(f.value("viscom.html.headings_min") == 0);
    CHECK(f.value("viscom.html.headings_max") == 2);
    CHECK(f.value("viscom.html.headings_avg") == doctest::Approx(1.0));
    CHECK(f.value("viscom.html.headings_std") == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(f.value("viscom.html.paragraphs_count") == 1);
    CHECK(f.value("viscom.html.total_tags") == 7);
    CHECK(f.value("viscom.html.max_depth") == 2);
    CHECK(f.value("viscom.html.distinct_tags") == 6);
    CHECK(f.value("viscom.html.text_nodes") == 4);
    CHECK(f.value("viscom.html.text_length") == 4);
    CHECK(f.value("viscom.html.script_style_count") == 1);
    CHECK(f.names == registry::html());
  }

  TEST_CASE("empty body gives zeros") {
    const auto f = html_features(parse_dom("<html><body></body></html>"));
    for (const auto& v : f.values) CHECK(*v == 0.0);
  }

  TEST_CASE("overlapping groups are rejected") {
    std::vector<TagGroupSpec> groups = {{"a", {"p"}, {GroupStat::kCount}},
                                        {"b", {"p", "div"}, {GroupStat::kCount}}};
    CHECK_THROWS_AS(check_tag_groups(groups), std::invalid_argument);
    groups = {{"a", {}, {GroupStat::kCount}}};
    CHECK_THROWS_AS(check_tag_groups(groups), std::invalid_argument);
  }

  TEST_CASE("counts are additive over sections") {
    const auto one = html_features(parse_dom("<ul><li>a<li>b</ul>"));
    const auto two = html_features(parse_dom("<ul><li>a<li>b</ul><ul><li>a<li>b</ul>"));
    CHECK(two.value("viscom.html.lists_count") == 2 * one.value("viscom.html.lists_count"));
    CHECK(two.value("viscom.html.lists_std") == 0.0);
  }
}

TEST_SUITE("text") {
  TEST_CASE("syllables") {
    CHECK(count_syllables("cat") == 1);
    CHECK(count_syllables("table") == 2);
    CHECK(count_syllables("make") == 1);
    CHECK(count_syllables("yellow") == 2);
    CHECK(count_syllables("rhythm") == 1);
    CHECK(count_syllables("beautiful") == 3);
    CHECK(count_syllables("queue") == 1);
    CHECK(count_syllables("idea") == 3);
    CHECK(count_syllables("the") == 1);
    CHECK(count_syllables("Thunderstorms") == 3);
  }

  TEST_CASE("tokenization") {
    CHECK(words_of("Don't stop, well-known 42 times!") ==
          std::vector<std::string>{"Don't", "stop", "well-known", "42", "times"});
    CHECK(sentences_of("One two. Three four?! Five") ==
          std::vector<std::string>{"One two.", "Three four?!", "Five"});
    CHECK(sentences_of("...").empty());
  }

  TEST_CASE("prose filter") {
    CHECK(is_prose("This is a short sentence."));
    CHECK(is_prose("He said it was over the hill.\")"));
    CHECK_FALSE(is_prose("Buy now!"));
    CHECK_FALSE(is_prose("Home About Contact Blog News"));
    CHECK_FALSE(is_prose("Red green blue yellow orange."));
  }

  TEST_CASE("main text skips page chrome") {
    const auto page = load_snapshot(fixture("bundles/f3_sections"));
    const auto main = extract_main_text(parse_dom(page.html));
    REQUIRE(main.paragraphs.size() == 2);
    CHECK(main.paragraphs[0].rfind("Thunderstorms form", 0) == 0);
    CHECK(main.paragraphs[1].rfind("Lightning is", 0) == 0);
    const auto nav = extract_main_text(parse_dom(
        "<nav><p>This is the menu of the site.</p></nav><p>This is <b>the</b> body text.</p>"));
    CHECK(nav.paragraphs == std::vector<std::string>{"This is the body text."});
  }

  TEST_CASE("hand counted readability") {
    const auto f = texcom_features(MainText{{"The cat sat on the mat. It was happy."}});
    const double words = 9, sentences = 2, syllables = 10, chars = 27;
    CHECK(f.value("texcom.words") == words);
    CHECK(f.value("texcom.sentences") == sentences);
    CHECK(f.value("texcom.syllables") == syllables);
    CHECK(f.value("texcom.characters") == chars);
    CHECK(f.value("texcom.paragraphs") == 1);
    CHECK(f.value("texcom.flesch_reading_ease") ==
          doctest::Approx(206.835 - 1.015 * 4.5 - 84.6 * syllables / words));
    CHECK(f.value("texcom.flesch_kincaid_grade") ==
          doctest::Approx(0.39 * 4.5 + 11.8 * syllables / words - 15.59));
    CHECK(f.value("texcom.ari") == doctest::Approx(4.71 * 3.0 + 0.5 * 4.5 - 21.43));
    CHECK(f.value("texcom.lix") == doctest::Approx(4.5));
    CHECK(f.value("texcom.smog") == doctest::Approx(3.1291));
    CHECK(f.value("texcom.type_token_ratio") == doctest::Approx(8.0 / 9.0));
    CHECK(f.value("texcom.min_sentence_length") == 3);
    CHECK(f.value("texcom.max_sentence_length") == 6);
    CHECK(f.value("texcom.tobeverb") == 1);
    CHECK(f.value("texcom.pronoun") == 1);
    CHECK(f.value("texcom.preposition") == 1);
    CHECK(f.value("texcom.begin_pronoun") == 1);
    CHECK(f.value("texcom.begin_article") == 1);
    CHECK(f.value("texcom.long_words") == 0);
  }

  TEST_CASE("empty text is all zeros") {
    const auto f = texcom_features(MainText{});
    REQUIRE(f.size() == 32);
    for (const auto& v : f.values) CHECK(*v == 0.0);
  }

  TEST_CASE("nominalizations and complex words") {
    const auto f = texcom_features(MainText{{"The organization made a decision about development."}});
    CHECK(f.value("texcom.nominalization") == 3);
    CHECK(f.value("texcom.complex_words") == 3);
  }
}
