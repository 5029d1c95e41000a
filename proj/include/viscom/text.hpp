#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "viscom/dom.hpp"
#include "viscom/features.hpp"

namespace viscom {

struct MainText {
  std::vector<std::string> paragraphs;

  friend bool operator==(const MainText&, const MainText&) = default;
};

// Prose filter: at least 5 whitespace tokens, ends in sentence punctuation
// (optionally followed by closing quotes or brackets), and contains a word
// from the function-word list.
bool is_prose(std::string_view paragraph);

// Inline text runs of block-level elements in <body>, skipping nav, header,
// footer, aside, form, script, style and similar subtrees, whitespace
// collapsed and kept when is_prose() holds.
MainText extract_main_text(const DomNode& document);

// Word tokens: runs of letters/digits (non-ASCII bytes count as letters)
// with inner apostrophes or hyphens.
std::vector<std::string> words_of(std::string_view text);

// Sentences of one paragraph: split after runs of . ! ? followed by
// whitespace or the end. Sentences without words are dropped.
std::vector<std::string> sentences_of(std::string_view paragraph);

// Vowel groups (y counts after the first letter), minus a silent final e
// (not "-le" after a consonant), at least 1. A short exception list
// overrides the rule.
int count_syllables(std::string_view word);

// The 32 textual-complexity features in registry order; all 0 for empty text.
FeatureVector texcom_features(const MainText& text);

}  // namespace viscom
